//! Exploratory measurements emitted as CSV. Deterministic under a fixed
//! seed; nothing here is asserted.

use rand::rngs::StdRng;
use rand::SeedableRng;

use rochsym::{
    max_isotropic, omega_n, roch_quasinorm, taylor_tuple, unbounded_symplectic_map, RochVector,
    SymplecticForm, TruncatedVector,
};

use crate::config::case_seed;
use crate::suites::random_tuple;

/// Rows `(k, q(image of (e_k, e_k)))` for the unbounded catalog map; the
/// quasinorm value is exactly `k + 2`.
pub fn unbounded_rows(truncation: usize) -> Vec<(usize, f64)> {
    let map = unbounded_symplectic_map(truncation);
    (1..=truncation)
        .map(|k| {
            let e = TruncatedVector::unit(truncation, k - 1);
            let v = RochVector::pair(e.clone(), e).unwrap();
            (k, roch_quasinorm(&map.apply_roch(&v).unwrap()))
        })
        .collect()
}

/// Sampled quasinorm of the Euclidean-orthogonal projection onto a maximal
/// isotropic subspace of the order-two form, across truncations. The basket
/// mixes random tuples with differential-aligned tuples, whose projections
/// are what make the constant grow.
pub fn isotropic_projection_constants(seed: u64) -> Vec<(usize, f64)> {
    [4usize, 8, 16, 32]
        .iter()
        .map(|&n| {
            let f = SymplecticForm::new(2, n, false).unwrap();
            let iso = max_isotropic(&f).unwrap().orthonormalized();
            let b = iso.basis();
            let projector = b * b.transpose();
            let mut rng =
                StdRng::seed_from_u64(case_seed(seed, "experiments", &format!("proj-{n}")));
            let mut kappa: f64 = 0.0;
            let mut consider = |v: &RochVector| {
                let q = roch_quasinorm(v);
                if q > 1e-12 {
                    let image = RochVector::from_flat(2, &(&projector * v.flatten())).unwrap();
                    kappa = kappa.max(roch_quasinorm(&image) / q);
                }
            };
            for _ in 0..300 {
                consider(&random_tuple(&mut rng, 2, n));
            }
            // structured extremals: tuples aligned with the differential
            let uniform =
                TruncatedVector::new(vec![1.0 / (n as f64).sqrt(); n]).unwrap();
            consider(&taylor_tuple(&uniform, 2));
            for k in 0..n {
                consider(&taylor_tuple(&TruncatedVector::unit(n, k), 2));
            }
            (n, kappa)
        })
        .collect()
}

/// Largest pairing-to-quasinorm ratio over `samples` random pairs; the
/// duality bound keeps it at or below three.
pub fn duality_ratio(truncation: usize, seed: u64, samples: usize) -> f64 {
    let mut rng =
        StdRng::seed_from_u64(case_seed(seed, "experiments", "duality-ratio"));
    let mut max_ratio: f64 = 0.0;
    for _ in 0..samples {
        let a = random_tuple(&mut rng, 2, truncation);
        let b = random_tuple(&mut rng, 2, truncation);
        let denom = roch_quasinorm(&a) * roch_quasinorm(&b);
        if denom > 1e-12 {
            max_ratio = max_ratio.max(omega_n(&a, &b).unwrap().abs() / denom);
        }
    }
    max_ratio
}

/// Known experiment names.
pub const EXPERIMENTS: [&str; 3] = ["unbounded-L", "isotropic-projection", "dbound-sampling"];

/// Runs one experiment and renders its CSV.
pub fn run(name: &str, truncation: usize, seed: u64) -> Option<String> {
    match name {
        "unbounded-L" => {
            let mut csv = String::from("k,quasinorm\n");
            for (k, q) in unbounded_rows(truncation) {
                csv.push_str(&format!("{k},{q}\n"));
            }
            Some(csv)
        }
        "isotropic-projection" => {
            let mut csv = String::from("dim,kappa\n");
            for (n, kappa) in isotropic_projection_constants(seed) {
                csv.push_str(&format!("{n},{kappa}\n"));
            }
            Some(csv)
        }
        "dbound-sampling" => {
            let ratio = duality_ratio(truncation, seed, 10_000);
            Some(format!("samples,max_ratio,bound\n10000,{ratio},3\n"))
        }
        _ => None,
    }
}
