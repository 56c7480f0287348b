//! Dense matrices and echelonized subspaces over the rationals.
//!
//! Everything here is exact; no floating point enters any routine. Subspaces
//! are kept in reduced row echelon form so that equality of subspaces is
//! representation equality.

use crate::qpoly::QPoly;
use crate::rational::{qi, Q};
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

/// A dense rational matrix, row major.
#[derive(Clone, PartialEq, Eq)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for QMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds a matrix from integer entries, row major.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        QMat::from_rows(rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Q) -> Self {
        let mut m = QMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn diagonal(entries: &[Q]) -> Self {
        let n = entries.len();
        let mut m = QMat::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Q::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn row(&self, i: usize) -> Vec<Q> {
        (0..self.cols).map(|j| self[(i, j)].clone()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// The matrix entries flattened row-major, the coordinates used when a
    /// matrix is treated as a vector in `n^2`-space.
    pub fn flatten(&self) -> Vec<Q> {
        self.data.clone()
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<Q>) -> Self {
        assert_eq!(data.len(), rows * cols);
        QMat { rows, cols, data }
    }

    pub fn transpose(&self) -> QMat {
        QMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, c: &Q) -> QMat {
        QMat::from_flat(self.rows, self.cols, self.data.iter().map(|x| x * c).collect())
    }

    pub fn trace(&self) -> Q {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn commutator(&self, other: &QMat) -> QMat {
        self * other - other * self
    }

    /// Frobenius pairing `tr(self * otherᵀ)`.
    pub fn frobenius(&self, other: &QMat) -> Q {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    /// Plain trace pairing `tr(self * other)`.
    pub fn trace_product(&self, other: &QMat) -> Q {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut acc = Q::zero();
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += &self[(i, k)] * &other[(k, i)];
            }
        }
        acc
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn pow(&self, mut e: u32) -> QMat {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = QMat::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Reduced row echelon form; returns the reduced matrix and pivot columns.
    pub fn rref(&self) -> (QMat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let v = &m[(i, j)] - &(&m[(r, j)] * &f);
                        m[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of the null space `{x : Ax = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let (m, pivots) = self.rref();
        let mut basis = Vec::new();
        let is_pivot = |c: usize| pivots.binary_search(&c).is_ok();
        for free in (0..self.cols).filter(|&c| !is_pivot(c)) {
            let mut v = vec![Q::zero(); self.cols];
            v[free] = Q::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[(r, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `Ax = b` exactly; `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(self.rows, b.len());
        let mut aug = QMat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (m, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // pivot in the augmented column
        }
        let mut x = vec![Q::zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = m[(r, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<QMat> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = QMat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Q::one();
        }
        let (m, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(QMat::from_fn(n, n, |i, j| m[(i, n + j)].clone()))
    }

    /// Characteristic polynomial via the Faddeev–LeVerrier recurrence,
    /// returned monic with coefficients low to high.
    pub fn char_poly(&self) -> QPoly {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![Q::zero(); n + 1];
        coeffs[n] = Q::one();
        let mut m = QMat::zeros(n, n); // M_0 = 0
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut am = self * &m;
            for i in 0..n {
                let v = &am[(i, i)] + &coeffs[n - k + 1];
                am[(i, i)] = v;
            }
            m = am;
            let t = (self * &m).trace();
            coeffs[n - k] = -(t / qi(k as i64));
        }
        QPoly::new(coeffs)
    }

    /// Minimal polynomial: least common multiple of the Krylov minimal
    /// polynomials of the standard basis vectors.
    pub fn min_poly(&self) -> QPoly {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = QPoly::one();
        for s in 0..n {
            let mut v = vec![Q::zero(); n];
            v[s] = Q::one();
            // Apply what we already know annihilates everything so far.
            let reduced = m.eval_matrix_apply(self, &v);
            if reduced.iter().all(Q::is_zero) {
                continue;
            }
            let local = self.krylov_min_poly(&reduced);
            m = m.mul(&local);
        }
        m.monic()
    }

    /// Minimal polynomial of `self` relative to the single vector `v`.
    fn krylov_min_poly(&self, v: &[Q]) -> QPoly {
        let n = self.rows;
        let mut basis: Vec<Vec<Q>> = Vec::new(); // echelonized iterates
        let mut ops: Vec<Vec<Q>> = Vec::new(); // row ops applied, in Krylov coords
        let mut cur = v.to_vec();
        let mut k = 0usize;
        loop {
            // Reduce cur against basis, tracking the combination.
            let mut combo = vec![Q::zero(); k + 1];
            combo[k] = Q::one();
            let mut red = cur.clone();
            for (b, op) in basis.iter().zip(&ops) {
                let lead = b.iter().position(|x| !x.is_zero()).unwrap();
                if !red[lead].is_zero() {
                    let f = &red[lead] / &b[lead];
                    for i in 0..n {
                        let vv = &red[i] - &(&b[i] * &f);
                        red[i] = vv;
                    }
                    for (ci, oc) in op.iter().enumerate() {
                        let vv = &combo[ci] - &(oc * &f);
                        combo[ci] = vv;
                    }
                }
            }
            if red.iter().all(Q::is_zero) {
                // combo gives the dependency: sum combo_i A^i v = 0
                return QPoly::new(combo).monic();
            }
            let mut op = combo;
            op.resize(k + 2, Q::zero());
            basis.push(red);
            ops.push(op);
            cur = self.apply(&cur);
            k += 1;
            assert!(k <= n, "Krylov sequence failed to terminate");
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| crate::rational::to_f64(&self[(i, j)])).collect())
            .collect()
    }

    /// Largest absolute value of an entry, as an exact rational.
    pub fn max_abs(&self) -> Q {
        self.data.iter().map(Signed::abs).max().unwrap_or_else(Q::zero)
    }
}

impl Index<(usize, usize)> for QMat {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &QMat {
    type Output = QMat;
    fn add(self, rhs: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QMat::from_flat(
            self.rows,
            self.cols,
            self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        )
    }
}

impl Sub for &QMat {
    type Output = QMat;
    fn sub(self, rhs: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QMat::from_flat(
            self.rows,
            self.cols,
            self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        )
    }
}

impl Sub for QMat {
    type Output = QMat;
    fn sub(self, rhs: QMat) -> QMat {
        &self - &rhs
    }
}

impl Neg for &QMat {
    type Output = QMat;
    fn neg(self) -> QMat {
        QMat::from_flat(self.rows, self.cols, self.data.iter().map(|x| -x.clone()).collect())
    }
}

impl Mul for &QMat {
    type Output = QMat;
    fn mul(self, rhs: &QMat) -> QMat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = QMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = &out[(i, j)] + &(a * &rhs[(k, j)]);
                    out[(i, j)] = v;
                }
            }
        }
        out
    }
}

/// Vector helpers over `Q`.
pub mod vec_ops {
    use super::Q;
    use num_traits::Zero;

    pub fn dot(a: &[Q], b: &[Q]) -> Q {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    pub fn add(a: &[Q], b: &[Q]) -> Vec<Q> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn scale(a: &[Q], c: &Q) -> Vec<Q> {
        a.iter().map(|x| x * c).collect()
    }

    pub fn is_zero(a: &[Q]) -> bool {
        a.iter().all(Zero::is_zero)
    }
}

/// A subspace of `ℚ^n`, stored as a reduced-row-echelon basis so that two
/// subspaces are equal exactly when their representations are.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Q>>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} of {})", self.dim(), self.ambient)
    }
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace::from_spanning(ambient, (0..ambient).map(|i| {
            let mut v = vec![Q::zero(); ambient];
            v[i] = Q::one();
            v
        }).collect())
    }

    pub fn from_spanning(ambient: usize, vectors: Vec<Vec<Q>>) -> Self {
        for v in &vectors {
            assert_eq!(v.len(), ambient);
        }
        if vectors.is_empty() {
            return Subspace::zero(ambient);
        }
        let (m, pivots) = QMat::from_rows(vectors).rref();
        let basis = (0..pivots.len()).map(|i| m.row(i)).collect();
        Subspace { ambient, basis }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(v.len(), self.ambient);
        let mut red = v.to_vec();
        let mut coords = Vec::with_capacity(self.basis.len());
        for b in &self.basis {
            let lead = b.iter().position(|x| !x.is_zero()).unwrap();
            let c = red[lead].clone();
            if !c.is_zero() {
                for i in 0..self.ambient {
                    let vv = &red[i] - &(&b[i] * &c);
                    red[i] = vv;
                }
            }
            coords.push(c);
        }
        vec_ops::is_zero(&red).then_some(coords)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::from_spanning(self.ambient, all)
    }

    /// Intersection via the kernel of the stacked coefficient matrix.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.ambient);
        }
        // Columns: coefficients on self.basis, then on other.basis; rows: ambient coords.
        let cols = self.dim() + other.dim();
        let m = QMat::from_fn(self.ambient, cols, |i, j| {
            if j < self.dim() {
                self.basis[j][i].clone()
            } else {
                -other.basis[j - self.dim()][i].clone()
            }
        });
        let vectors = m
            .kernel()
            .into_iter()
            .map(|k| {
                let mut v = vec![Q::zero(); self.ambient];
                for (j, b) in self.basis.iter().enumerate() {
                    for i in 0..self.ambient {
                        let vv = &v[i] + &(&b[i] * &k[j]);
                        v[i] = vv;
                    }
                }
                v
            })
            .collect();
        Subspace::from_spanning(self.ambient, vectors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn kernel_of_zero_map_is_full_space() {
        let k = QMat::zeros(3, 3).kernel();
        assert_eq!(k.len(), 3);
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let b = vec![qi(1), qi(-2), q(1, 3)];
        assert_eq!(QMat::identity(3).solve(&b).unwrap(), b);
    }

    #[test]
    fn kernel_of_rank_one_matrix() {
        let m = QMat::from_i64(&[&[1, 1], &[2, 2]]);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        // span{(1, -1)}
        assert_eq!(&k[0][0] + &k[0][1], Q::zero());
        assert!(!k[0][0].is_zero());
    }

    #[test]
    fn inconsistent_solve_is_none() {
        let m = QMat::from_i64(&[&[1, 1], &[1, 1]]);
        assert!(m.solve(&[qi(0), qi(1)]).is_none());
    }

    #[test]
    fn inverse_round_trip() {
        let m = QMat::from_i64(&[&[2, 1, 0], &[1, 1, 1], &[0, 3, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, QMat::identity(3));
        assert!(QMat::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn char_poly_of_companion() {
        // x^2 - x - 1 companion
        let m = QMat::from_i64(&[&[0, 1], &[1, 1]]);
        let p = m.char_poly();
        assert_eq!(p.coeffs(), &[qi(-1), qi(-1), qi(1)]);
    }

    #[test]
    fn min_poly_annihilates_matrix_and_drops_multiplicity() {
        let m = QMat::from_i64(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 3]]);
        let p = m.min_poly();
        assert_eq!(p.deg(), 2);
        assert!(p.eval_matrix(&m).is_zero());

        let n = QMat::from_i64(&[&[0, 1], &[0, 0]]);
        assert_eq!(n.min_poly().coeffs(), &[qi(0), qi(0), qi(1)]); // x^2
    }

    #[test]
    fn subspace_canonical_form_and_intersection() {
        let a = Subspace::from_spanning(3, vec![
            vec![qi(1), qi(1), qi(0)],
            vec![qi(0), qi(0), qi(1)],
        ]);
        let b = Subspace::from_spanning(3, vec![
            vec![qi(2), qi(2), qi(2)],
            vec![qi(0), qi(0), qi(5)],
        ]);
        assert_eq!(a, b);
        let c = Subspace::from_spanning(3, vec![vec![qi(0), qi(1), qi(0)], vec![qi(0), qi(0), qi(1)]]);
        let i = a.intersect(&c);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&[qi(0), qi(0), qi(1)]));
    }

    #[test]
    fn coordinates_reconstruct_vector() {
        let s = Subspace::from_spanning(3, vec![vec![qi(1), qi(2), qi(0)], vec![qi(0), qi(1), qi(1)]]);
        let v = vec![qi(2), qi(5), qi(1)];
        let coords = s.coordinates(&v).unwrap();
        let mut rec = vec![Q::zero(); 3];
        for (c, b) in coords.iter().zip(s.basis()) {
            rec = vec_ops::add(&rec, &vec_ops::scale(b, c));
        }
        assert_eq!(rec, v);
        assert!(s.coordinates(&[qi(1), qi(0), qi(0)]).is_none());
    }
}
