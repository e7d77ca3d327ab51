//! Fixtures shared by the benchmarks.

use schubert_torsion::poly::Polynomial;
use schubert_torsion::SeedData;

/// The n = 4, a = 11 seed whose `x` has length 77 in `S_15`.
pub fn example_seed() -> SeedData {
    SeedData::from_pairs(4, &[(2, 3), (3, 2), (2, 2), (1, 2), (1, 2)]).expect("balanced")
}

/// `ε_1^d + ε_1 ε_2^{d-1} + ... ` in `nvars` variables: a dense-ish input
/// of degree `d`.
pub fn staircase(nvars: usize, d: u16) -> Polynomial {
    let mut p = Polynomial::zero(nvars);
    for i in 1..=nvars {
        for j in 0..=d {
            let powers = [(i, j), (i % nvars + 1, d - j)];
            p = p + Polynomial::monomial(nvars, (i as i64) - j as i64, &powers);
        }
    }
    p
}
