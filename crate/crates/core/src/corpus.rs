//! A small library of named Lie algebras given by structure constants.
//!
//! These are the standard desk examples: Heisenberg algebras, filiform
//! algebras, the Euclidean motion algebra, hyperbolic planes and their sums.
//! All constructors return validated brackets.

use crate::bracket::BracketTensor;

/// Heisenberg algebra `h3`: `[e1,e2] = e3`.
pub fn heisenberg3() -> BracketTensor {
    BracketTensor::from_i64_entries(3, &[(0, 1, 2, 1)]).validated().unwrap()
}

/// Heisenberg algebra `h5`: `[e1,e2] = e5`, `[e3,e4] = e5`.
pub fn heisenberg5() -> BracketTensor {
    BracketTensor::from_i64_entries(5, &[(0, 1, 4, 1), (2, 3, 4, 1)])
        .validated()
        .unwrap()
}

/// Abelian algebra of the given dimension (zero bracket).
pub fn abelian(n: usize) -> BracketTensor {
    BracketTensor::zero(n)
}

/// Filiform algebra `L4`: `[e1,e2] = e3`, `[e1,e3] = e4`.
pub fn filiform4() -> BracketTensor {
    BracketTensor::from_i64_entries(4, &[(0, 1, 2, 1), (0, 2, 3, 1)])
        .validated()
        .unwrap()
}

/// Filiform algebra `L5`: `[e1,e_i] = e_{i+1}` for `i = 2, 3, 4`.
pub fn filiform5() -> BracketTensor {
    BracketTensor::from_i64_entries(5, &[(0, 1, 2, 1), (0, 2, 3, 1), (0, 3, 4, 1)])
        .validated()
        .unwrap()
}

/// Free 2-step nilpotent algebra on three generators (dimension 6).
pub fn free_two_step3() -> BracketTensor {
    BracketTensor::from_i64_entries(6, &[(0, 1, 3, 1), (0, 2, 4, 1), (1, 2, 5, 1)])
        .validated()
        .unwrap()
}

/// Hyperbolic plane algebra: `[e1,e2] = e2` (non-unimodular, Einstein).
pub fn hyperbolic_plane() -> BracketTensor {
    BracketTensor::from_i64_entries(2, &[(0, 1, 1, 1)]).validated().unwrap()
}

/// Euclidean motion algebra `e(2)`: `[e1,e2] = e3`, `[e1,e3] = -e2`;
/// solvable, unimodular, flat, not completely solvable.
pub fn euclidean_e2() -> BracketTensor {
    BracketTensor::from_i64_entries(3, &[(0, 1, 2, 1), (0, 2, 1, -1)])
        .validated()
        .unwrap()
}

/// The `sol` algebra: `[e1,e2] = e2`, `[e1,e3] = -e3`; unimodular,
/// completely solvable, admits a solsoliton but no Einstein metric.
pub fn sol3() -> BracketTensor {
    BracketTensor::from_i64_entries(3, &[(0, 1, 1, 1), (0, 2, 2, -1)])
        .validated()
        .unwrap()
}

/// Lie algebra of real hyperbolic 3-space: `[e1,e2] = e2`, `[e1,e3] = e3`.
pub fn hyperbolic_space3() -> BracketTensor {
    BracketTensor::from_i64_entries(3, &[(0, 1, 1, 1), (0, 2, 2, 1)])
        .validated()
        .unwrap()
}

/// A solvable algebra whose only complement to the nilradical acts by a
/// non-semisimple map: `[e1,e2] = e2`, `[e1,e3] = e2 + e3`. Admits neither a
/// flat metric nor any solsoliton.
pub fn jordan_block_solvable() -> BracketTensor {
    BracketTensor::from_i64_entries(3, &[(0, 1, 1, 1), (0, 2, 1, 1), (0, 2, 2, 1)])
        .validated()
        .unwrap()
}

/// Named nilpotent corpus in dimensions ≤ 6.
pub fn nilpotent_corpus() -> Vec<(&'static str, BracketTensor)> {
    vec![
        ("h3", heisenberg3()),
        ("h3+R", heisenberg3().direct_sum(&abelian(1))),
        ("h5", heisenberg5()),
        ("L4", filiform4()),
        ("L5", filiform5()),
        ("free2step3", free_two_step3()),
        ("h3+h3", heisenberg3().direct_sum(&heisenberg3())),
        ("abelian3", abelian(3)),
    ]
}

/// Named solvable (non-nilpotent) corpus.
pub fn solvable_corpus() -> Vec<(&'static str, BracketTensor)> {
    vec![
        ("hyperbolic", hyperbolic_plane()),
        ("e2", euclidean_e2()),
        ("sol3", sol3()),
        ("hyp3", hyperbolic_space3()),
        ("hyp+hyp", hyperbolic_plane().direct_sum(&hyperbolic_plane())),
        ("hyp+R", hyperbolic_plane().direct_sum(&abelian(1))),
        ("jordan", jordan_block_solvable()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_entries_are_valid_lie_brackets() {
        for (name, t) in nilpotent_corpus().into_iter().chain(solvable_corpus()) {
            assert!(t.validate_jacobi().is_empty(), "{name} violates Jacobi");
        }
    }

    #[test]
    fn corpus_classification_sanity() {
        for (name, t) in nilpotent_corpus() {
            assert!(t.classify().nilpotent, "{name} must be nilpotent");
        }
        for (name, t) in solvable_corpus() {
            let c = t.classify();
            assert!(c.solvable && !c.nilpotent, "{name} must be solvable, not nilpotent");
        }
    }

    #[test]
    fn sol3_is_unimodular_jordan_is_not_flat_material() {
        assert!(sol3().classify().unimodular);
        assert!(!hyperbolic_plane().classify().unimodular);
        let jc = jordan_block_solvable().classify();
        assert!(jc.solvable && !jc.unimodular);
    }
}
