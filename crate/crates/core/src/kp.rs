//! Kalton-Peck differentials and the model quasinorms.
//!
//! The order-`k` differential acts coordinatewise as
//! `v_i -> (2^k / k!) * v_i * log^k(|v_i| / ||v||_2)`, with `0 * log 0 := 0`
//! and the zero vector mapped to zero. Dividing by the norm inside the
//! logarithm makes the map exactly homogeneous of degree one for every real
//! scalar, and it agrees with the raw coordinate formula on normalized
//! vectors.
//!
//! The twisted-sum quasinorm is `||(w, x)|| = ||w - O1(x)||_2 + ||x||_2`,
//! and the higher-order surrogate sums the deviations of each layer from the
//! differential of the bottom layer. The surrogate is exact for orders one
//! and two; for higher orders it is a sampling model only and never enters
//! an algebraic identity.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::operator::LinearOperator;
use crate::vector::{RochVector, TruncatedVector};

/// Order-`k` Kalton-Peck differential, extended homogeneously.
///
/// Requires `k >= 1`; order zero is the identity embedding and is handled
/// where block operators are assembled.
pub fn kp_differential(v: &TruncatedVector, k: u32) -> TruncatedVector {
    assert!(k >= 1, "differential order must be at least 1");
    let norm = v.norm();
    if norm == 0.0 {
        return TruncatedVector::zero(v.dim());
    }
    let factor = pow2_over_factorial(k);
    let coords = v
        .as_slice()
        .iter()
        .map(|&x| {
            if x == 0.0 {
                0.0
            } else {
                factor * x * (x.abs() / norm).ln().powi(k as i32)
            }
        })
        .collect();
    TruncatedVector::new(coords).expect("finite by construction")
}

fn pow2_over_factorial(k: u32) -> f64 {
    let mut acc = 1.0;
    for j in 1..=k {
        acc *= 2.0 / j as f64;
    }
    acc
}

/// Quasinorm of the twisted pair `(w, x)`.
pub fn z2_quasinorm(w: &TruncatedVector, x: &TruncatedVector) -> Result<f64> {
    if w.dim() != x.dim() {
        return Err(Error::DimensionMismatch {
            context: "twisted pair quasinorm",
            expected: w.dim(),
            found: x.dim(),
        });
    }
    Ok(w.sub(&kp_differential(x, 1))?.norm() + x.norm())
}

/// Model quasinorm for an order-`n` tuple: `||x_0||` plus the deviation of
/// each higher layer from the corresponding differential of `x_0`. For
/// `n = 1` this is the Euclidean norm and for `n = 2` it coincides with
/// [`z2_quasinorm`].
pub fn roch_quasinorm(v: &RochVector) -> f64 {
    let n = v.order();
    let x0 = v.layer_by_subscript(0);
    let mut total = x0.norm();
    for k in 1..n {
        let expected = kp_differential(x0, k as u32);
        let layer = v.layer_by_subscript(k);
        total += layer.sub(&expected).expect("layers share dimension").norm();
    }
    total
}

/// Quasinorm of a layer-major flattened tuple.
pub fn roch_quasinorm_flat(order: usize, flat: &nalgebra::DVector<f64>) -> Result<f64> {
    Ok(roch_quasinorm(&RochVector::from_flat(order, flat)?))
}

/// The tuple `(O^{n-1} x, ..., O^1 x, x)` whose deviation terms all vanish,
/// so its model quasinorm equals `||x||_2`.
pub fn taylor_tuple(x: &TruncatedVector, order: usize) -> RochVector {
    assert!(order >= 1, "order must be at least 1");
    let mut layers = Vec::with_capacity(order);
    for k in (1..order).rev() {
        layers.push(kp_differential(x, k as u32));
    }
    layers.push(x.clone());
    RochVector::new(layers).expect("equal dimensions by construction")
}

/// Sampled operator quasinorm of a square operator on an order-`n`
/// truncation: the largest ratio `q(Tv) / q(v)` over a deterministic basket
/// of coordinate tuples, Gaussian tuples and differential-aligned tuples
/// `(O^k x, ..., x)`. A sampled value is a lower bound on the true operator
/// quasinorm, so comparisons built on it refute but never certify.
pub fn sampled_quasinorm_opnorm(
    t: &LinearOperator,
    order: usize,
    rng: &mut impl Rng,
    random_samples: usize,
) -> Result<f64> {
    if !t.is_square() {
        return Err(Error::NotSquare { rows: t.rows(), cols: t.cols() });
    }
    if order == 0 || !t.rows().is_multiple_of(order) {
        return Err(Error::DimensionMismatch {
            context: "operator layer split",
            expected: order,
            found: t.rows(),
        });
    }
    let truncation = t.rows() / order;
    let mut best: f64 = 0.0;
    let mut consider = |v: &RochVector| -> Result<()> {
        let q = roch_quasinorm(v);
        if q == 0.0 {
            return Ok(());
        }
        let image = t.apply_roch(v)?;
        let ratio = roch_quasinorm(&image) / q;
        if ratio > best {
            best = ratio;
        }
        Ok(())
    };
    for p in 0..order {
        for c in 0..truncation {
            consider(&RochVector::unit(order, truncation, p, c))?;
        }
    }
    for _ in 0..random_samples {
        let v = random_tuple(order, truncation, rng);
        consider(&v)?;
        let x = random_unit_vector(truncation, rng);
        consider(&taylor_tuple(&x, order))?;
    }
    Ok(best)
}

pub(crate) fn random_unit_vector(dim: usize, rng: &mut impl Rng) -> TruncatedVector {
    loop {
        let coords: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let v = TruncatedVector::new(coords).expect("finite samples");
        let n = v.norm();
        if n > 1e-6 {
            return v.scale(1.0 / n);
        }
    }
}

pub(crate) fn random_tuple(order: usize, truncation: usize, rng: &mut impl Rng) -> RochVector {
    let layers = (0..order)
        .map(|_| {
            let coords: Vec<f64> = (0..truncation).map(|_| rng.sample(StandardNormal)).collect();
            TruncatedVector::new(coords).expect("finite samples")
        })
        .collect();
    RochVector::new(layers).expect("equal dimensions")
}

#[cfg(test)]
mod tests {
    use super::*;

    const LN_2: f64 = std::f64::consts::LN_2;

    #[test]
    fn differential_kills_basis_vectors() {
        // single-support normalized vectors have log 1 = 0 in every coordinate
        let e3 = TruncatedVector::unit(8, 2);
        assert!(kp_differential(&e3, 1).is_zero());
        assert!(kp_differential(&TruncatedVector::unit(4, 0), 3).is_zero());
    }

    #[test]
    fn differential_two_point_vector() {
        // independent scalar route: 2 * 1 * log(1/sqrt(2)) = -log 2
        let v = TruncatedVector::new(vec![1.0, 1.0]).unwrap();
        let d = kp_differential(&v, 1);
        assert!((d.as_slice()[0] + LN_2).abs() < 1e-15);
        assert!((d.as_slice()[1] + LN_2).abs() < 1e-15);
    }

    #[test]
    fn differential_of_zero_is_zero() {
        assert!(kp_differential(&TruncatedVector::zero(5), 2).is_zero());
    }

    #[test]
    fn differential_is_homogeneous_both_signs() {
        let v = TruncatedVector::new(vec![0.3, -1.2, 0.0, 2.5]).unwrap();
        for &lambda in &[2.0, -3.5, 0.25, -0.125] {
            for k in 1..=4 {
                let left = kp_differential(&v.scale(lambda), k);
                let right = kp_differential(&v, k).scale(lambda);
                let diff = left.sub(&right).unwrap().norm();
                assert!(diff < 1e-12, "k={k} lambda={lambda} diff={diff}");
            }
        }
    }

    #[test]
    fn quasinorm_frozen_values() {
        let n = 8;
        let e1 = TruncatedVector::unit(n, 0);
        let zero = TruncatedVector::zero(n);
        assert_eq!(z2_quasinorm(&zero, &e1).unwrap(), 1.0);
        assert_eq!(z2_quasinorm(&e1, &zero).unwrap(), 1.0);
    }

    #[test]
    fn quasinorm_linear_growth_row() {
        // q((n+1) e_n, e_n) = n + 2 exactly, the unbounded-transformation witness
        let dim = 16;
        for n in 1..=dim {
            let e = TruncatedVector::unit(dim, n - 1);
            let w = e.scale((n + 1) as f64);
            let q = z2_quasinorm(&w, &e).unwrap();
            assert!((q - (n + 2) as f64).abs() < 1e-12, "n={n} q={q}");
        }
    }

    #[test]
    fn quasinorm_dimension_mismatch() {
        let a = TruncatedVector::zero(3);
        let b = TruncatedVector::zero(4);
        assert!(z2_quasinorm(&a, &b).is_err());
    }

    #[test]
    fn roch_quasinorm_consistency() {
        let w = TruncatedVector::new(vec![0.5, -1.0, 2.0]).unwrap();
        let x = TruncatedVector::new(vec![1.0, 1.0, -0.5]).unwrap();
        let pair = RochVector::pair(w.clone(), x.clone()).unwrap();
        let q2 = z2_quasinorm(&w, &x).unwrap();
        assert!((roch_quasinorm(&pair) - q2).abs() < 1e-14);

        let single = RochVector::new(vec![x.clone()]).unwrap();
        assert!((roch_quasinorm(&single) - x.norm()).abs() < 1e-15);
    }

    #[test]
    fn taylor_tuple_collapses_to_l2_norm() {
        let x = TruncatedVector::new(vec![0.2, 1.4, -0.7, 0.0, 3.0]).unwrap();
        for order in 1..=5 {
            let v = taylor_tuple(&x, order);
            assert!((roch_quasinorm(&v) - x.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn roch_quasinorm_order_three_basis() {
        let v = RochVector::new(vec![
            TruncatedVector::zero(4),
            TruncatedVector::zero(4),
            TruncatedVector::unit(4, 0),
        ])
        .unwrap();
        assert_eq!(roch_quasinorm(&v), 1.0);
    }
}
