//! Coordinate vectors for truncated sequence spaces.

use nalgebra::DVector;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A real coordinate vector modeling a truncation of the Hilbert sequence
/// space to dimension `N >= 1`. Entries are finite and the dimension is
/// fixed at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedVector {
    coords: DVector<f64>,
}

impl TruncatedVector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyVector);
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { coords: DVector::from_vec(coords) })
    }

    pub fn from_dvector(coords: DVector<f64>) -> Result<Self> {
        Self::new(coords.iter().copied().collect())
    }

    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        Self { coords: DVector::zeros(dim) }
    }

    /// The canonical basis vector `e_{index+1}` (zero-based `index`).
    pub fn unit(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index out of range");
        let mut coords = DVector::zeros(dim);
        coords[index] = 1.0;
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn as_slice(&self) -> &[f64] {
        self.coords.as_slice()
    }

    pub fn norm(&self) -> f64 {
        self.coords.norm()
    }

    pub fn inner(&self, other: &Self) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                context: "inner product",
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self.coords.dot(&other.coords))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                context: "vector addition",
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Self { coords: &self.coords + &other.coords })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                context: "vector subtraction",
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Self { coords: &self.coords - &other.coords })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { coords: &self.coords * factor }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0.0)
    }
}

/// Euclidean norm of a truncated vector; zero exactly for the zero vector.
pub fn l2_norm(v: &TruncatedVector) -> f64 {
    v.norm()
}

#[derive(Serialize, Deserialize)]
struct VectorRepr {
    dim: usize,
    coords: Vec<f64>,
}

impl Serialize for TruncatedVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        VectorRepr { dim: self.dim(), coords: self.as_slice().to_vec() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TruncatedVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = VectorRepr::deserialize(deserializer)?;
        if repr.coords.len() != repr.dim {
            return Err(D::Error::custom("coords length does not match declared dim"));
        }
        TruncatedVector::new(repr.coords).map_err(D::Error::custom)
    }
}

/// An ordered tuple `(x_{n-1}, ..., x_1, x_0)` of equal-dimension truncated
/// vectors, stored top layer first (layer-major). `layers()[p]` is the layer
/// at storage position `p`, so `layers()[0] = x_{n-1}` and
/// `layers()[n-1] = x_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RochVector {
    layers: Vec<TruncatedVector>,
}

impl RochVector {
    pub fn new(layers: Vec<TruncatedVector>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::EmptyVector);
        }
        let dim = layers[0].dim();
        if let Some(bad) = layers.iter().find(|l| l.dim() != dim) {
            return Err(Error::DimensionMismatch {
                context: "tuple layers",
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Self { layers })
    }

    /// A Z2-style pair `(w, x)` with `w` on top.
    pub fn pair(w: TruncatedVector, x: TruncatedVector) -> Result<Self> {
        Self::new(vec![w, x])
    }

    pub fn zero(order: usize, truncation: usize) -> Self {
        assert!(order >= 1, "order must be at least 1");
        Self { layers: (0..order).map(|_| TruncatedVector::zero(truncation)).collect() }
    }

    /// Basis tuple with `e_{coord+1}` at storage position `position` and
    /// zeros elsewhere.
    pub fn unit(order: usize, truncation: usize, position: usize, coord: usize) -> Self {
        assert!(position < order, "layer position out of range");
        let mut v = Self::zero(order, truncation);
        v.layers[position] = TruncatedVector::unit(truncation, coord);
        v
    }

    pub fn order(&self) -> usize {
        self.layers.len()
    }

    pub fn truncation(&self) -> usize {
        self.layers[0].dim()
    }

    pub fn flat_dim(&self) -> usize {
        self.order() * self.truncation()
    }

    /// Layers in storage order, `x_{n-1}` first.
    pub fn layers(&self) -> &[TruncatedVector] {
        &self.layers
    }

    /// Layer at storage position `p` (0 = top layer `x_{n-1}`).
    pub fn layer_at(&self, position: usize) -> &TruncatedVector {
        &self.layers[position]
    }

    /// Layer by mathematical subscript: `layer_by_subscript(0) = x_0`.
    pub fn layer_by_subscript(&self, i: usize) -> &TruncatedVector {
        &self.layers[self.order() - 1 - i]
    }

    /// Layer-major flattening: storage position 0 occupies the first
    /// `truncation` coordinates.
    pub fn flatten(&self) -> DVector<f64> {
        let n = self.truncation();
        let mut out = DVector::zeros(self.flat_dim());
        for (p, layer) in self.layers.iter().enumerate() {
            out.rows_mut(p * n, n).copy_from(layer.coords());
        }
        out
    }

    pub fn from_flat(order: usize, flat: &DVector<f64>) -> Result<Self> {
        if order == 0 || !flat.len().is_multiple_of(order) {
            return Err(Error::DimensionMismatch {
                context: "layer-major unflatten",
                expected: order,
                found: flat.len(),
            });
        }
        let n = flat.len() / order;
        if n == 0 {
            return Err(Error::EmptyVector);
        }
        let layers = (0..order)
            .map(|p| TruncatedVector::from_dvector(flat.rows(p * n, n).into_owned()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(layers)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.order() != other.order() {
            return Err(Error::DimensionMismatch {
                context: "tuple addition",
                expected: self.order(),
                found: other.order(),
            });
        }
        let layers = self
            .layers
            .iter()
            .zip(&other.layers)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(layers)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { layers: self.layers.iter().map(|l| l.scale(factor)).collect() }
    }
}

#[derive(Serialize, Deserialize)]
struct RochRepr {
    order: usize,
    dim: usize,
    layers: Vec<Vec<f64>>,
}

impl Serialize for RochVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RochRepr {
            order: self.order(),
            dim: self.truncation(),
            layers: self.layers.iter().map(|l| l.as_slice().to_vec()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RochVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = RochRepr::deserialize(deserializer)?;
        if repr.layers.len() != repr.order {
            return Err(D::Error::custom("layer count does not match declared order"));
        }
        if repr.layers.iter().any(|l| l.len() != repr.dim) {
            return Err(D::Error::custom("layer length does not match declared dim"));
        }
        let layers = repr
            .layers
            .into_iter()
            .map(TruncatedVector::new)
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        RochVector::new(layers).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l2_norm_basics() {
        assert_eq!(l2_norm(&TruncatedVector::unit(4, 0)), 1.0);
        let v = TruncatedVector::new(vec![3.0, 4.0, 0.0]).unwrap();
        assert_eq!(l2_norm(&v), 5.0);
        assert_eq!(l2_norm(&TruncatedVector::zero(7)), 0.0);
    }

    #[test]
    fn flatten_is_layer_major_top_first() {
        let w = TruncatedVector::new(vec![1.0, 2.0]).unwrap();
        let x = TruncatedVector::new(vec![3.0, 4.0]).unwrap();
        let v = RochVector::pair(w, x).unwrap();
        assert_eq!(v.flatten().as_slice(), &[1.0, 2.0, 3.0, 4.0]);
        let back = RochVector::from_flat(2, &v.flatten()).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn subscript_accessor_reverses_storage() {
        let v = RochVector::new(vec![
            TruncatedVector::unit(2, 0),
            TruncatedVector::unit(2, 1),
            TruncatedVector::zero(2),
        ])
        .unwrap();
        // storage (x_2, x_1, x_0)
        assert_eq!(v.layer_by_subscript(2), v.layer_at(0));
        assert_eq!(v.layer_by_subscript(0), v.layer_at(2));
    }

    #[test]
    fn json_schema_shape() {
        let v = RochVector::pair(
            TruncatedVector::new(vec![0.0, 1.0]).unwrap(),
            TruncatedVector::new(vec![2.0, 0.0]).unwrap(),
        )
        .unwrap();
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, r#"{"order":2,"dim":2,"layers":[[0.0,1.0],[2.0,0.0]]}"#);
    }

    #[test]
    fn mismatched_layers_rejected() {
        let err = RochVector::new(vec![TruncatedVector::zero(2), TruncatedVector::zero(3)]);
        assert!(err.is_err());
    }
}
