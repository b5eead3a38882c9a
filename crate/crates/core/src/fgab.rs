//! Integer linear algebra over finitely generated abelian groups.
//!
//! Everything here works with arbitrary precision integers. The Smith normal
//! form is the workhorse: kernels, cokernels and Gale duals are all read off
//! from the unimodular transforms it produces. Bases that are only defined up
//! to a unimodular change are canonicalized through the row Hermite normal
//! form so that results are stable across runs.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FgabError {
    #[error("map is not surjective onto the target group")]
    NotSurjective,
    #[error("dimension mismatch: {0}")]
    Shape(String),
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows. All rows must share a length; `cols` is
    /// needed for the zero-row case.
    pub fn from_rows(rows: &[Vec<BigInt>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            for (j, x) in row.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let big: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::from_rows(&big, cols)
    }

    /// Matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(cols: &[Vec<BigInt>], rows: usize) -> Self {
        Self::from_rows(cols, rows).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn column_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn rank(&self) -> usize {
        smith_normal_form(self).rank()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = v / &prev;
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        sign * m[(n - 1, n - 1)].clone()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(src, j)] * c;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self[(i, src)] * c;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// A finitely generated abelian group `Z^free ⊕ Z/d_1 ⊕ … ⊕ Z/d_k` with
/// `d_1 | d_2 | … | d_k` and every `d_i ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FgAbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl FgAbelianGroup {
    pub fn free(rank: usize) -> Self {
        FgAbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    /// Number of generators in the invariant-factor presentation
    /// (torsion coordinates first, then free ones).
    pub fn num_generators(&self) -> usize {
        self.torsion.len() + self.free_rank
    }

    pub fn is_chain(&self) -> bool {
        self.torsion.iter().all(|d| *d >= BigInt::from(2))
            && self.torsion.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `A = U·S·V` with `U`, `V` unimodular and `S` diagonal with a divisibility
/// chain. `P = U⁻¹` and `Q = V⁻¹` are kept as well, so that `P·A·Q = S`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub p: IntMatrix,
    pub q: IntMatrix,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        let n = self.s.rows().min(self.s.cols());
        (0..n).take_while(|&i| !self.s[(i, i)].is_zero()).count()
    }

    /// The nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank()).map(|i| self.s[(i, i)].clone()).collect()
    }
}

/// Smith normal form. Pivoting always takes the entry of least absolute value
/// (first in row-major order among ties), so the output is deterministic.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut p = IntMatrix::identity(m);
    let mut pinv = IntMatrix::identity(m);
    let mut q = IntMatrix::identity(n);
    let mut qinv = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = &s[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if s[(bi, bj)].abs() <= x.abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return SmithDecomposition {
                    u: pinv,
                    s,
                    v: qinv,
                    p,
                    q,
                };
            };
            if bi != t {
                s.swap_rows(t, bi);
                p.swap_rows(t, bi);
                pinv.swap_cols(t, bi);
            }
            if bj != t {
                s.swap_cols(t, bj);
                q.swap_cols(t, bj);
                qinv.swap_rows(t, bj);
            }

            let mut dirty = false;
            for i in t + 1..m {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let c = -(&s[(i, t)] / &s[(t, t)]);
                s.add_row(i, t, &c);
                p.add_row(i, t, &c);
                pinv.add_col(t, i, &-&c);
                dirty |= !s[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let c = -(&s[(t, j)] / &s[(t, t)]);
                s.add_col(j, t, &c);
                q.add_col(j, t, &c);
                qinv.add_row(t, j, &-&c);
                dirty |= !s[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }

            let pivot = s[(t, t)].clone();
            let offender = (t + 1..m)
                .find(|&i| (t + 1..n).any(|j| !(&s[(i, j)] % &pivot).is_zero()));
            if let Some(i) = offender {
                let one = BigInt::one();
                s.add_row(t, i, &one);
                p.add_row(t, i, &one);
                pinv.add_col(i, t, &-one);
                continue;
            }
            break;
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            p.negate_row(t);
            pinv.negate_col(t);
        }
    }
    SmithDecomposition {
        u: pinv,
        s,
        v: qinv,
        p,
        q,
    }
}

/// Row Hermite normal form: a canonical basis of the lattice spanned by the
/// rows of `a`. Pivots are positive and entries above a pivot lie in
/// `[0, pivot)`. Zero rows are dropped.
pub fn hermite_rows(a: &IntMatrix) -> IntMatrix {
    let mut h = a.clone();
    let (m, n) = (h.rows(), h.cols());
    let mut prow = 0;
    for c in 0..n {
        if prow == m {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in prow..m {
                if h[(i, c)].is_zero() {
                    continue;
                }
                match best {
                    Some(b) if h[(b, c)].abs() <= h[(i, c)].abs() => {}
                    _ => best = Some(i),
                }
            }
            let Some(b) = best else { break };
            h.swap_rows(prow, b);
            let mut done = true;
            for i in prow + 1..m {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let k = -(&h[(i, c)] / &h[(prow, c)]);
                h.add_row(i, prow, &k);
                done &= h[(i, c)].is_zero();
            }
            if done {
                break;
            }
        }
        if h[(prow, c)].is_zero() {
            continue;
        }
        if h[(prow, c)].is_negative() {
            h.negate_row(prow);
        }
        for i in 0..prow {
            let k = -h[(i, c)].div_floor(&h[(prow, c)]);
            h.add_row(i, prow, &k);
        }
        prow += 1;
    }
    let rows: Vec<Vec<BigInt>> = (0..prow).map(|i| h.row(i)).collect();
    IntMatrix::from_rows(&rows, n)
}

/// Reduces `v` modulo the full-rank lattice whose row Hermite basis is `h`
/// (square, upper triangular); the result has `0 ≤ v_k < h_kk`.
pub fn reduce_mod_hermite(v: &[BigInt], h: &IntMatrix) -> Vec<BigInt> {
    let mut out = v.to_vec();
    let mut prow = 0;
    for c in 0..h.cols() {
        if prow == h.rows() || h[(prow, c)].is_zero() {
            continue;
        }
        let k = out[c].div_floor(&h[(prow, c)]);
        if !k.is_zero() {
            for j in 0..h.cols() {
                out[j] -= &k * &h[(prow, j)];
            }
        }
        prow += 1;
    }
    out
}

/// Canonical coset representatives of `Z^r / Λ` where `Λ` is the full-rank
/// lattice spanned by the rows of `generators`, in lexicographic order.
pub fn coset_representatives(generators: &IntMatrix) -> Vec<Vec<BigInt>> {
    let h = hermite_rows(generators);
    let r = h.cols();
    assert_eq!(h.rows(), r, "coset representatives need a full-rank lattice");
    let bounds: Vec<BigInt> = (0..r).map(|k| h[(k, k)].clone()).collect();
    let mut out = vec![vec![BigInt::zero(); r]];
    for k in (0..r).rev() {
        let mut next = Vec::new();
        for v in &out {
            let mut x = BigInt::zero();
            while x < bounds[k] {
                let mut w = v.clone();
                w[k] = x.clone();
                next.push(w);
                x += 1;
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// ℤ-basis of `{x : A·x = 0}` as the columns of the returned matrix,
/// canonicalized by Hermite normal form.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    let n = a.cols();
    let cols: Vec<Vec<BigInt>> = (rank..n).map(|j| snf.q.column(j)).collect();
    if cols.is_empty() {
        return IntMatrix::zeros(n, 0);
    }
    hermite_rows(&IntMatrix::from_rows(&cols, n)).transpose()
}

/// Cokernel of `A : Z^k → Z^m` together with the quotient map `Z^m → coker`
/// written in the invariant-factor coordinates of the returned group
/// (torsion coordinates first, reduced modulo their order; then free ones).
#[derive(Clone, Debug)]
pub struct Cokernel {
    pub group: FgAbelianGroup,
    pub projection: IntMatrix,
}

pub fn cokernel(a: &IntMatrix) -> Cokernel {
    let m = a.rows();
    let snf = smith_normal_form(a);
    let factors = snf.invariant_factors();
    let rank = factors.len();
    let mut torsion = Vec::new();
    let mut rows = Vec::new();
    for (i, d) in factors.iter().enumerate() {
        if !d.is_one() {
            torsion.push(d.clone());
            rows.push(snf.p.row(i).iter().map(|x| x.mod_floor(d)).collect());
        }
    }
    for i in rank..m {
        rows.push(snf.p.row(i));
    }
    Cokernel {
        group: FgAbelianGroup {
            free_rank: m - rank,
            torsion,
        },
        projection: IntMatrix::from_rows(&rows, m),
    }
}

/// The relation matrix of `target` in its invariant-factor coordinates.
fn relation_block(target: &FgAbelianGroup) -> IntMatrix {
    let g = target.num_generators();
    let t = target.torsion.len();
    let mut r = IntMatrix::zeros(g, t);
    for (i, d) in target.torsion.iter().enumerate() {
        r[(i, i)] = d.clone();
    }
    r
}

fn hstack(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    assert_eq!(a.rows(), b.rows());
    let mut out = IntMatrix::zeros(a.rows(), a.cols() + b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out[(i, j)] = a[(i, j)].clone();
        }
        for j in 0..b.cols() {
            out[(i, a.cols() + j)] = b[(i, j)].clone();
        }
    }
    out
}

/// Whether `beta : Z^N → target` (columns are images of the standard basis in
/// invariant-factor coordinates) is surjective.
pub fn is_surjective(beta: &IntMatrix, target: &FgAbelianGroup) -> bool {
    let g = target.num_generators();
    if beta.rows() != g {
        return false;
    }
    let snf = smith_normal_form(&hstack(beta, &relation_block(target)));
    snf.rank() == g && snf.invariant_factors().iter().all(One::is_one)
}

/// Gale dual of `beta : Z^N → target`. Returns the `r × N` matrix whose
/// columns are the characters `D_i`, canonicalized by row Hermite form.
pub fn gale_dual(beta: &IntMatrix, target: &FgAbelianGroup) -> Result<IntMatrix, FgabError> {
    let g = target.num_generators();
    if beta.rows() != g {
        return Err(FgabError::Shape(format!(
            "beta has {} rows but the target has {g} generators",
            beta.rows()
        )));
    }
    if !is_surjective(beta, target) {
        return Err(FgabError::NotSurjective);
    }
    let n = beta.cols();
    let big = hstack(beta, &relation_block(target));
    let ker = kernel_basis(&big);
    let rows: Vec<Vec<BigInt>> = ker
        .column_vecs()
        .into_iter()
        .map(|c| c[..n].to_vec())
        .collect();
    Ok(hermite_rows(&IntMatrix::from_rows(&rows, n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_snf(a: &IntMatrix) {
        let d = smith_normal_form(a);
        assert_eq!(d.u.mul(&d.s).mul(&d.v), *a);
        assert_eq!(d.p.mul(a).mul(&d.q), d.s);
        assert!(d.u.determinant().abs().is_one());
        assert!(d.v.determinant().abs().is_one());
        for i in 0..d.s.rows() {
            for j in 0..d.s.cols() {
                if i != j {
                    assert!(d.s[(i, j)].is_zero());
                }
            }
        }
        let f = d.invariant_factors();
        assert!(f.iter().all(|x| x.is_positive()));
        assert!(f.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
    }

    #[test]
    fn snf_identity() {
        let a = IntMatrix::from_i64(&[&[1, 0], &[0, 1]]);
        let d = smith_normal_form(&a);
        assert_eq!(d.s, a);
        check_snf(&a);
    }

    #[test]
    fn snf_diag_2_3() {
        let a = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        let d = smith_normal_form(&a);
        assert_eq!(d.s, IntMatrix::from_i64(&[&[1, 0], &[0, 6]]));
        check_snf(&a);
    }

    #[test]
    fn snf_row_vector() {
        let a = IntMatrix::from_i64(&[&[1, 2, -1, -2]]);
        let d = smith_normal_form(&a);
        assert_eq!(d.s, IntMatrix::from_i64(&[&[1, 0, 0, 0]]));
        check_snf(&a);
    }

    #[test]
    fn snf_zero_and_empty() {
        check_snf(&IntMatrix::zeros(2, 3));
        check_snf(&IntMatrix::zeros(0, 3));
        check_snf(&IntMatrix::zeros(3, 0));
    }

    #[test]
    fn kernel_of_row() {
        let a = IntMatrix::from_i64(&[&[1, 2, -1, -2]]);
        let k = kernel_basis(&a);
        assert_eq!(k.cols(), 3);
        assert!(a.mul(&k).is_zero());
        let d = smith_normal_form(&k);
        assert_eq!(d.invariant_factors(), big(&[1, 1, 1]));
    }

    #[test]
    fn kernel_trivial_cases() {
        let inj = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        assert_eq!(kernel_basis(&inj).cols(), 0);
        let z = IntMatrix::zeros(1, 3);
        assert_eq!(kernel_basis(&z), IntMatrix::identity(3));
    }

    #[test]
    fn cokernel_examples() {
        let c = cokernel(&IntMatrix::from_i64(&[&[2]]));
        assert_eq!(c.group.free_rank, 0);
        assert_eq!(c.group.torsion, big(&[2]));

        let col = IntMatrix::from_i64(&[&[1], &[2], &[-1], &[-2]]);
        let c = cokernel(&col);
        assert_eq!(c.group, FgAbelianGroup::free(3));
        assert!(c.projection.mul(&col).is_zero());
    }

    #[test]
    fn gale_dual_examples() {
        let col = IntMatrix::from_i64(&[&[1], &[2], &[-1], &[-2]]);
        let c = cokernel(&col);
        let d = gale_dual(&c.projection, &c.group).unwrap();
        assert_eq!(d, IntMatrix::from_i64(&[&[1, 2, -1, -2]]));

        let d = gale_dual(&IntMatrix::identity(3), &FgAbelianGroup::free(3)).unwrap();
        assert_eq!(d.rows(), 0);

        let beta = IntMatrix::from_i64(&[&[1, 2]]);
        let d = gale_dual(&beta, &FgAbelianGroup::free(1)).unwrap();
        assert_eq!(d, IntMatrix::from_i64(&[&[2, -1]]));
    }

    #[test]
    fn gale_dual_not_surjective() {
        let beta = IntMatrix::from_i64(&[&[2, 4]]);
        assert_eq!(
            gale_dual(&beta, &FgAbelianGroup::free(1)),
            Err(FgabError::NotSurjective)
        );
    }

    #[test]
    fn gale_dual_with_torsion_target() {
        // Z^2 -> Z/2, both generators to 1: kernel is {(a,b) : a+b even}.
        let beta = IntMatrix::from_i64(&[&[1, 1]]);
        let target = FgAbelianGroup {
            free_rank: 0,
            torsion: big(&[2]),
        };
        let d = gale_dual(&beta, &target).unwrap();
        assert_eq!(d, IntMatrix::from_i64(&[&[1, 1], &[0, 2]]));
    }

    #[test]
    fn hermite_is_canonical() {
        let a = IntMatrix::from_i64(&[&[2, 4, 1], &[0, 3, 5]]);
        let g = IntMatrix::from_i64(&[&[1, 1], &[1, 2]]);
        assert_eq!(hermite_rows(&a), hermite_rows(&g.mul(&a)));
    }

    #[test]
    fn coset_reps_of_index_two() {
        let reps = coset_representatives(&IntMatrix::from_i64(&[&[2]]));
        assert_eq!(reps, vec![big(&[0]), big(&[1])]);
        let reps = coset_representatives(&IntMatrix::from_i64(&[&[1, 1], &[1, -1]]));
        assert_eq!(reps.len(), 2);
    }

    #[test]
    fn determinant_small() {
        let a = IntMatrix::from_i64(&[&[0, 2, 1], &[1, 0, 0], &[3, 1, 1]]);
        assert_eq!(a.determinant(), BigInt::from(-1));
    }

    fn small_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-5i64..=5, r * c).prop_map(move |v| {
                let rows: Vec<Vec<BigInt>> = v.chunks(c).map(big).collect();
                IntMatrix::from_rows(&rows, c)
            })
        })
    }

    fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
        let mut m = IntMatrix::identity(n);
        for &(i, j, c) in ops {
            let (i, j) = (i % n, j % n);
            if i != j {
                m.add_row(i, j, &BigInt::from(c));
            } else {
                m.negate_row(i);
            }
        }
        m
    }

    proptest! {
        #[test]
        fn snf_roundtrip(a in small_matrix()) {
            check_snf(&a);
        }

        #[test]
        fn kernel_is_annihilated(a in small_matrix()) {
            let k = kernel_basis(&a);
            prop_assert!(a.mul(&k).is_zero());
            prop_assert_eq!(k.cols(), a.cols() - a.rank());
            if k.cols() > 0 {
                // saturated: all invariant factors of the basis are 1
                let f = smith_normal_form(&k).invariant_factors();
                prop_assert!(f.iter().all(One::is_one));
            }
        }

        #[test]
        fn cokernel_is_invariant_under_unimodular_change(
            a in small_matrix(),
            lops in proptest::collection::vec((0usize..6, 0usize..6, -3i64..=3), 0..6),
            rops in proptest::collection::vec((0usize..6, 0usize..6, -3i64..=3), 0..6),
        ) {
            let l = unimodular(a.rows(), &lops);
            let r = unimodular(a.cols(), &rops);
            let b = l.mul(&a).mul(&r);
            prop_assert_eq!(cokernel(&a).group, cokernel(&b).group);
        }
    }
}
