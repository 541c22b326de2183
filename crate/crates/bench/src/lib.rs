//! Seeded inputs shared by the benchmarks.

use cospan_core::sample::{random_cospan, random_simplicial};
use cospan_core::{build_pinned_cospan, Field, FilteredCospan, Rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn lambda() -> Rational {
    Rational::from_integer(2.into())
}

/// `n` random cospans with at most `max_gens` generators each.
pub fn cospans(field: Field, max_gens: usize, n: usize, seed: u64) -> Vec<FilteredCospan> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| random_cospan(field, &lambda(), max_gens, &mut rng).expect("valid sample"))
        .collect()
}

/// Pinned cospan of a random complex on `vertices` vertices.
pub fn simplicial(vertices: usize, seed: u64) -> FilteredCospan {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = random_simplicial(Field::Prime(2), &lambda(), vertices, &mut rng);
    build_pinned_cospan(&s).expect("pinned cospan builds")
}
