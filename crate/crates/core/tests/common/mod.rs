//! Shared generators for the integration suites: seeded random brackets and
//! basis changes.

#![allow(dead_code)]

use bracketflow::bracket::BracketTensor;
use bracketflow::qmat::QMat;
use bracketflow::rational::{qi, Q};
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Random two-step nilpotent bracket: generators `{e_1..e_g}`, center
/// `{e_{g+1}..e_{g+c}}`, coefficients in `{-2..2}`. Two-step brackets satisfy
/// the Jacobi identity identically.
pub fn random_two_step(rng: &mut StdRng, generators: usize, center: usize) -> BracketTensor {
    let dim = generators + center;
    loop {
        let mut t = BracketTensor::zero(dim);
        let mut nonzero = false;
        for i in 0..generators {
            for j in (i + 1)..generators {
                for k in generators..dim {
                    let c: i64 = rng.gen_range(-2..=2);
                    if c != 0 {
                        t.set(i, j, k, qi(c));
                        nonzero = true;
                    }
                }
            }
        }
        if nonzero {
            return t.validated().expect("two-step brackets satisfy Jacobi");
        }
    }
}

/// Random invertible integer matrix with small entries: a product of
/// elementary shears and signed permutations.
pub fn random_unimodular(rng: &mut StdRng, n: usize, steps: usize) -> QMat {
    let mut g = QMat::identity(n);
    for _ in 0..steps {
        match rng.gen_range(0..3) {
            0 => {
                // shear: row_i += c * row_j
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n);
                while j == i {
                    j = rng.gen_range(0..n);
                }
                let c: i64 = *[-1i64, 1, 2].get(rng.gen_range(0..3)).unwrap();
                let mut e = QMat::identity(n);
                e[(i, j)] = qi(c);
                g = &e * &g;
            }
            1 => {
                // swap two rows
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n);
                while j == i {
                    j = rng.gen_range(0..n);
                }
                let mut e = QMat::identity(n);
                e[(i, i)] = Q::zero();
                e[(j, j)] = Q::zero();
                e[(i, j)] = qi(1);
                e[(j, i)] = qi(1);
                g = &e * &g;
            }
            _ => {
                // sign flip
                let i = rng.gen_range(0..n);
                let mut e = QMat::identity(n);
                e[(i, i)] = qi(-1);
                g = &e * &g;
            }
        }
    }
    g
}

/// Random signed permutation matrix (orthogonal, rational).
pub fn random_signed_permutation(rng: &mut StdRng, n: usize) -> QMat {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    let mut m = QMat::zeros(n, n);
    for (col, &row) in perm.iter().enumerate() {
        m[(row, col)] = if rng.gen_bool(0.5) { qi(1) } else { qi(-1) };
    }
    m
}

/// Random diagonal solvable bracket `[e1, e_j] = λ_j e_j` with small nonzero
/// integer weights.
pub fn random_diagonal_solvable(rng: &mut StdRng, dim: usize) -> BracketTensor {
    assert!(dim >= 2);
    let mut t = BracketTensor::zero(dim);
    for j in 1..dim {
        let mut c: i64 = 0;
        while c == 0 {
            c = rng.gen_range(-2..=2);
        }
        t.set(0, j, j, qi(c));
    }
    t.validated().expect("diagonal actions satisfy Jacobi")
}

/// A pool of random validated Jacobi brackets in dimensions 3–5, mixing
/// two-step nilpotent and diagonal solvable examples, optionally conjugated.
pub fn random_jacobi_pool(seed: u64, count: usize) -> Vec<BracketTensor> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let dim = r.gen_range(3..=5usize);
        let t = match r.gen_range(0..3) {
            0 => {
                let gens = (dim - 1).max(2);
                random_two_step(&mut r, gens, dim - gens)
            }
            1 => random_diagonal_solvable(&mut r, dim),
            _ => {
                let gens = (dim - 1).max(2);
                let base = random_two_step(&mut r, gens, dim - gens);
                let g = random_unimodular(&mut r, dim, 4);
                base.act(&g).expect("unimodular matrices are invertible")
            }
        };
        if !t.is_zero() {
            out.push(t);
        }
    }
    out
}

/// Random weight system rows with entries in `{-3..3}`.
pub fn random_weights(rng: &mut StdRng, rank: usize, rows: usize) -> Vec<Vec<Q>> {
    (0..rows)
        .map(|_| (0..rank).map(|_| qi(rng.gen_range(-3..=3))).collect())
        .collect()
}

/// Exhaustive integer grid oracle for the destabilizer question: search
/// directions in `{-20..20}^rank` for `Wd ≥ 0`, `Wd ≠ 0`.
///
/// Complete for integer weights bounded by 3 in rank ≤ 3: if a valid
/// direction exists, some extreme ray of the cone is valid, and an extreme
/// ray is an integer Cramer kernel vector of at most two tight rows, with
/// entries bounded by 2·3² = 18 < 20.
pub fn grid_destabilizer_oracle(weights: &[Vec<Q>], rank: usize) -> bool {
    assert!(rank <= 3, "grid oracle sized for rank ≤ 3");
    let w: Vec<Vec<i64>> = weights
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| {
                    use num_traits::ToPrimitive;
                    assert!(c.denom() == &num_bigint::BigInt::from(1));
                    c.numer().to_i64().unwrap()
                })
                .collect()
        })
        .collect();
    let k = 20i64;
    let mut coords = vec![-k; rank];
    loop {
        if coords.iter().any(|&c| c != 0) {
            let mut ok = true;
            let mut nonzero = false;
            for row in &w {
                let v: i64 = row.iter().zip(&coords).map(|(a, b)| a * b).sum();
                if v < 0 {
                    ok = false;
                    break;
                }
                if v > 0 {
                    nonzero = true;
                }
            }
            if ok && nonzero {
                return true;
            }
        }
        // advance odometer
        let mut idx = 0;
        loop {
            if idx == rank {
                return false;
            }
            coords[idx] += 1;
            if coords[idx] > k {
                coords[idx] = -k;
                idx += 1;
            } else {
                break;
            }
        }
    }
}
