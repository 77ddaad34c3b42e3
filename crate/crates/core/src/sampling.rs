//! Seeded random polynomials, vector fields, frame changes and rational
//! points for randomized checks.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chart::{ChartRef, VectorField};
use crate::error::Result;
use crate::poly::{q_frac, Q};
use crate::scalar::Scalar;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of the random polynomials.
#[derive(Clone, Copy, Debug)]
pub struct PolyShape {
    pub max_terms: usize,
    pub max_degree: u32,
    pub max_coeff: i64,
}

impl Default for PolyShape {
    fn default() -> Self {
        PolyShape {
            max_terms: 3,
            max_degree: 2,
            max_coeff: 3,
        }
    }
}

fn nonzero(rng: &mut SampleRng, bound: i64) -> i64 {
    let v = rng.gen_range(1..=bound);
    if rng.gen_bool(0.5) {
        -v
    } else {
        v
    }
}

/// A random polynomial in the given coordinates (possibly zero).
pub fn random_polynomial(rng: &mut SampleRng, coords: &[String], shape: PolyShape) -> Scalar {
    let mut acc = Scalar::zero();
    let terms = rng.gen_range(0..=shape.max_terms);
    for _ in 0..terms {
        let mut t = Scalar::int(nonzero(rng, shape.max_coeff));
        let degree = rng.gen_range(0..=shape.max_degree);
        for _ in 0..degree {
            if coords.is_empty() {
                break;
            }
            let c = &coords[rng.gen_range(0..coords.len())];
            t = t.mul(&Scalar::coord(c));
        }
        acc = acc.add(&t);
    }
    acc
}

/// A random vector field with polynomial coefficients; each component is
/// zero with probability `sparsity`.
pub fn random_field(rng: &mut SampleRng, chart: &ChartRef, shape: PolyShape, sparsity: f64) -> VectorField {
    let coeffs = chart
        .coords()
        .iter()
        .map(|_| {
            if rng.gen_bool(sparsity) {
                Scalar::zero()
            } else {
                random_polynomial(rng, chart.coords(), shape)
            }
        })
        .collect();
    VectorField::from_coeffs(chart, coeffs)
}

/// An invertible k×k matrix over the polynomial ring: a random permutation
/// of a triangular matrix with nonzero constant diagonal and polynomial
/// entries above it.
pub fn random_frame_change(rng: &mut SampleRng, chart: &ChartRef, k: usize, shape: PolyShape) -> Vec<Vec<Scalar>> {
    let mut m = vec![vec![Scalar::zero(); k]; k];
    for i in 0..k {
        m[i][i] = Scalar::int(nonzero(rng, shape.max_coeff));
        for j in i + 1..k {
            m[i][j] = random_polynomial(rng, chart.coords(), shape);
        }
    }
    let mut perm: Vec<usize> = (0..k).collect();
    for i in (1..k).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    perm.into_iter().map(|p| m[p].clone()).collect()
}

/// Applies a matrix of functions to a frame: row i gives Σ_j m_ij v_j.
pub fn apply_frame_change(m: &[Vec<Scalar>], frame: &[VectorField]) -> Result<Vec<VectorField>> {
    m.iter()
        .map(|row| {
            let terms: Vec<(Scalar, &VectorField)> = row.iter().cloned().zip(frame).collect();
            VectorField::combination(frame[0].chart(), &terms)
        })
        .collect()
}

/// A random rational number p/q with |p| ≤ bound, 1 ≤ q ≤ bound.
pub fn random_rational(rng: &mut SampleRng, bound: i64) -> Q {
    q_frac(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound))
}

/// A random rational point of the chart.
pub fn random_point(rng: &mut SampleRng, chart: &ChartRef, bound: i64) -> BTreeMap<String, Q> {
    chart
        .coords()
        .iter()
        .map(|c| (c.clone(), random_rational(rng, bound)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::Chart;

    #[test]
    fn seeded_sampling_is_deterministic() {
        let chart = Chart::new(&["a", "b"], vec![]).unwrap();
        let f = |seed| random_field(&mut rng(seed), &chart, PolyShape::default(), 0.2);
        assert_eq!(f(7), f(7));
    }

    #[test]
    fn frame_changes_are_invertible() {
        let chart = Chart::new(&["a", "b", "c"], vec![]).unwrap();
        for seed in 0..20 {
            let mut r = rng(seed);
            let m = random_frame_change(&mut r, &chart, 3, PolyShape::default());
            let rows: Vec<Vec<Scalar>> = m.clone();
            assert_eq!(crate::linalg::rank(&rows, 3), 3, "seed {seed}");
        }
    }
}
