//! Exact linear algebra over the rationals.
//!
//! Only what the rest of the crate needs: an incremental reduced row-echelon
//! accumulator with kernel extraction, and an exact solver for (possibly
//! overdetermined) linear systems. Kernel bases are normalized to primitive
//! integer vectors with positive leading entry, so results are deterministic.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::Rat;

/// Reduced row-echelon accumulator over the rationals.
///
/// Rows are inserted one at a time; each is reduced against the current
/// pivots and, if nonzero, becomes a new pivot row (Gauss-Jordan style, so
/// pivot columns are eliminated from all other rows).
pub struct Echelon {
    cols: usize,
    /// `(pivot column, row)` with the pivot entry normalized to 1.
    rows: Vec<(usize, Vec<Rat>)>,
}

impl Echelon {
    pub fn new(cols: usize) -> Echelon {
        Echelon { cols, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// True once the row space is all of the column space (empty kernel).
    pub fn full_rank(&self) -> bool {
        self.rows.len() == self.cols
    }

    /// Insert a row; returns `true` if it was independent of the rows seen
    /// so far (i.e. the rank grew).
    pub fn insert(&mut self, mut row: Vec<Rat>) -> bool {
        debug_assert_eq!(row.len(), self.cols);
        if row.iter().all(Rat::is_zero) {
            return false;
        }
        for (pc, prow) in &self.rows {
            if !row[*pc].is_zero() {
                let f = row[*pc].clone();
                for j in 0..self.cols {
                    let delta = &f * &prow[j];
                    row[j] -= delta;
                }
            }
        }
        let Some(pc) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = row[pc].clone();
        for x in &mut row {
            *x /= &inv;
        }
        // Eliminate the new pivot column from the existing rows.
        for (_, prow) in &mut self.rows {
            if !prow[pc].is_zero() {
                let f = prow[pc].clone();
                for j in 0..self.cols {
                    let delta = &f * &row[j];
                    prow[j] -= delta;
                }
            }
        }
        self.rows.push((pc, row));
        self.rows.sort_by_key(|(pc, _)| *pc);
        true
    }

    /// Basis of the kernel of the accumulated row space, as primitive integer
    /// vectors, ordered by ascending free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let pivot_cols: Vec<usize> = self.rows.iter().map(|(pc, _)| *pc).collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (pc, row) in &self.rows {
                v[*pc] = -row[free].clone();
            }
            normalize_primitive(&mut v);
            basis.push(v);
        }
        basis
    }
}

/// Fraction-free forward echelon over the integers, for hot loops: rows are
/// cleared of denominators on entry and row operations are
/// `row * pivot - prow * entry`, so no rational reduction happens during
/// elimination. Rows are kept primitive to bound coefficient growth.
pub struct FractionFreeEchelon {
    cols: usize,
    /// `(pivot column, row)` in insertion order; each row has zeros at the
    /// pivot columns of all earlier rows.
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl FractionFreeEchelon {
    pub fn new(cols: usize) -> FractionFreeEchelon {
        FractionFreeEchelon { cols, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn full_rank(&self) -> bool {
        self.rows.len() == self.cols
    }

    pub fn insert(&mut self, row: Vec<Rat>) -> bool {
        debug_assert_eq!(row.len(), self.cols);
        let mut denom_lcm = BigInt::one();
        for x in &row {
            denom_lcm = num_integer::lcm(denom_lcm, x.denom().clone());
        }
        let mut row: Vec<BigInt> =
            row.iter().map(|x| x.numer() * (&denom_lcm / x.denom())).collect();
        for (pc, prow) in &self.rows {
            if row[*pc].is_zero() {
                continue;
            }
            let a = std::mem::replace(&mut row[*pc], BigInt::zero());
            let b = prow[*pc].clone();
            for j in 0..self.cols {
                if j == *pc {
                    continue;
                }
                let t = &row[j] * &b - &prow[j] * &a;
                row[j] = t;
            }
        }
        let Some(pc) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let mut g = BigInt::zero();
        for x in &row {
            g = num_integer::gcd(g, x.clone());
        }
        if row[pc].sign() == num_bigint::Sign::Minus {
            g = -g;
        }
        for x in &mut row {
            *x /= &g;
        }
        self.rows.push((pc, row));
        true
    }

    /// Kernel basis as primitive integer vectors, one per free column in
    /// ascending order. Uses back-substitution in reverse insertion order:
    /// each stored row has zeros at all earlier pivot columns, so its pivot
    /// entry is determined by free columns and later pivots alone.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let pivot_cols: Vec<usize> = self.rows.iter().map(|(pc, _)| *pc).collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut x = vec![Rat::zero(); self.cols];
            x[free] = Rat::one();
            for (pc, row) in self.rows.iter().rev() {
                let mut s = Rat::zero();
                for (j, c) in row.iter().enumerate() {
                    if j != *pc && !c.is_zero() && !x[j].is_zero() {
                        s += Rat::from_integer(c.clone()) * &x[j];
                    }
                }
                x[*pc] = -s / Rat::from_integer(row[*pc].clone());
            }
            normalize_primitive(&mut x);
            basis.push(x);
        }
        basis
    }
}

/// Rank of a set of rows.
pub fn rank(rows: &[Vec<Rat>], cols: usize) -> usize {
    let mut ech = Echelon::new(cols);
    for r in rows {
        ech.insert(r.clone());
    }
    ech.rank()
}

/// Kernel basis of the matrix with the given rows.
pub fn kernel_basis(rows: &[Vec<Rat>], cols: usize) -> Vec<Vec<Rat>> {
    let mut ech = Echelon::new(cols);
    for r in rows {
        ech.insert(r.clone());
    }
    ech.kernel_basis()
}

/// Solve `A x = b` exactly, where `rows` are the rows of `A`.
///
/// Returns `None` when the system is inconsistent; free variables, if any,
/// are set to zero.
pub fn solve(rows: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    debug_assert_eq!(rows.len(), rhs.len());
    let cols = rows.first().map_or(0, |r| r.len());
    let mut ech = Echelon::new(cols + 1);
    for (r, b) in rows.iter().zip(rhs) {
        let mut aug = r.clone();
        aug.push(b.clone());
        ech.insert(aug);
    }
    // A pivot in the augmented column means `b` is outside the column space.
    if ech.rows.iter().any(|(pc, _)| *pc == cols) {
        return None;
    }
    let mut x = vec![Rat::zero(); cols];
    for (pc, row) in &ech.rows {
        x[*pc] = row[cols].clone();
    }
    Some(x)
}

/// Scale a rational vector to a primitive integer vector whose first nonzero
/// entry is positive. The zero vector is left unchanged.
pub fn normalize_primitive(v: &mut [Rat]) {
    let Some(first) = v.iter().position(|x| !x.is_zero()) else {
        return;
    };
    let mut denom_lcm = BigInt::one();
    for x in v.iter() {
        denom_lcm = num_integer::lcm(denom_lcm, x.denom().clone());
    }
    let mut numer_gcd = BigInt::zero();
    for x in v.iter() {
        let scaled = x.numer() * (&denom_lcm / x.denom());
        numer_gcd = num_integer::gcd(numer_gcd, scaled);
    }
    let mut factor = Rat::new(denom_lcm, numer_gcd);
    if v[first].is_negative() == factor.is_positive() {
        factor = -factor;
    }
    for x in v.iter_mut() {
        *x *= &factor;
    }
}

/// True iff `a = c * b` for some nonzero rational `c`; returns the constant.
pub fn proportionality_constant(a: &[Rat], b: &[Rat]) -> Option<Rat> {
    debug_assert_eq!(a.len(), b.len());
    let mut c: Option<Rat> = None;
    for (x, y) in a.iter().zip(b) {
        match (x.is_zero(), y.is_zero()) {
            (true, true) => continue,
            (true, false) | (false, true) => return None,
            (false, false) => {
                let ratio = x / y;
                match &c {
                    None => c = Some(ratio),
                    Some(prev) if *prev == ratio => {}
                    Some(_) => return None,
                }
            }
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rint, rq};

    fn r(vals: &[i64]) -> Vec<Rat> {
        vals.iter().map(|&v| rint(v)).collect()
    }

    #[test]
    fn kernel_of_simple_matrix() {
        // x + y + z = 0, y - z = 0  =>  kernel spanned by (-2, 1, 1)
        let rows = vec![r(&[1, 1, 1]), r(&[0, 1, -1])];
        let k = kernel_basis(&rows, 3);
        assert_eq!(k, vec![r(&[2, -1, -1])]);
    }

    #[test]
    fn rank_and_full_kernel() {
        let rows = vec![r(&[1, 2]), r(&[2, 4]), r(&[3, 6])];
        assert_eq!(rank(&rows, 2), 1);
        let k = kernel_basis(&rows, 2);
        assert_eq!(k, vec![r(&[2, -1])]);

        let zero_rows: Vec<Vec<Rat>> = vec![r(&[0, 0])];
        let k = kernel_basis(&zero_rows, 2);
        assert_eq!(k.len(), 2);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let rows = vec![r(&[1, 1]), r(&[1, -1]), r(&[2, 0])];
        let x = solve(&rows, &r(&[3, 1, 4])).unwrap();
        assert_eq!(x, r(&[2, 1]));
        assert!(solve(&rows, &r(&[3, 1, 5])).is_none());
    }

    #[test]
    fn primitive_normalization() {
        let mut v = vec![rq(-2, 3), rq(4, 3), rint(0)];
        normalize_primitive(&mut v);
        assert_eq!(v, vec![rint(1), rint(-2), rint(0)]);
    }

    #[test]
    fn fraction_free_agrees_with_rational_echelon() {
        let matrices: Vec<Vec<Vec<Rat>>> = vec![
            vec![r(&[1, 1, 1]), r(&[0, 1, -1])],
            vec![r(&[2, 4]), r(&[1, 2]), r(&[0, 0])],
            vec![vec![rq(1, 2), rq(-1, 3), rint(0)], vec![rq(5, 7), rint(2), rq(3, 4)]],
            vec![r(&[1, 0, 0]), r(&[0, 1, 0]), r(&[0, 0, 1])],
        ];
        for m in matrices {
            let cols = m[0].len();
            let mut ff = FractionFreeEchelon::new(cols);
            let mut ech = Echelon::new(cols);
            for row in &m {
                ff.insert(row.clone());
                ech.insert(row.clone());
            }
            assert_eq!(ff.rank(), ech.rank());
            assert_eq!(ff.kernel_basis(), ech.kernel_basis());
            assert_eq!(ff.full_rank(), ff.rank() == cols);
        }
    }

    #[test]
    fn proportionality() {
        let a = vec![rint(2), rint(-4), rint(0)];
        let b = vec![rint(-1), rint(2), rint(0)];
        assert_eq!(proportionality_constant(&a, &b), Some(rint(-2)));
        let c = vec![rint(1), rint(1), rint(0)];
        assert_eq!(proportionality_constant(&a, &c), None);
        assert_eq!(proportionality_constant(&[rint(0)], &[rint(0)]), None);
    }
}
