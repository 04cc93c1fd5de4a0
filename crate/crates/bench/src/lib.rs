//! Inputs shared by the benchmarks.

use bogomolov::families::{self, ExtraspecialKind};
use bogomolov::lattice::IntMatrix;
use bogomolov::PcPresentation;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Named groups spanning small to cap-sized orders.
pub fn groups() -> Vec<(String, PcPresentation)> {
    let mut out = vec![
        ("heisenberg_3".to_string(), families::heisenberg(3).unwrap()),
        ("extraspecial_3_2".to_string(), families::extraspecial(3, 2, ExtraspecialKind::ExponentP).unwrap()),
    ];
    for i in 1..=6 {
        out.push((format!("G{i}_3_1"), families::series_g(i, 3, 1).unwrap()));
    }
    out
}

/// Dense `rows x cols` matrix with entries in `-bound..=bound`.
pub fn random_matrix(rows: usize, cols: usize, bound: i64, seed: u64) -> IntMatrix {
    let mut rng = StdRng::seed_from_u64(seed);
    let data: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
    IntMatrix::from_rows(cols, &data)
}
