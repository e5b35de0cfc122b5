//! Dense row-major N-dimensional array.

use crate::error::{Error, Result};
use crate::numerics::scalar::Scalar;
use crate::rng::SplitMix64;

/// Dense tensor with shape metadata. Image data uses batch × channels ×
/// height × width layout.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor<S> {
    shape: Vec<usize>,
    data: Vec<S>,
}

impl<S: Scalar> Tensor<S> {
    /// Invariants: every extent ≥ 1 and `product(shape) == data.len()`.
    pub fn new(shape: Vec<usize>, data: Vec<S>) -> Result<Self> {
        if shape.iter().any(|&d| d == 0) {
            return Err(Error::shape(format!("zero extent in shape {shape:?}")));
        }
        let numel: usize = shape.iter().product();
        if numel != data.len() {
            return Err(Error::shape(format!(
                "shape {shape:?} wants {numel} elements, data has {}",
                data.len()
            )));
        }
        Ok(Tensor { shape, data })
    }

    pub fn zeros(shape: &[usize]) -> Self {
        let numel: usize = shape.iter().product();
        Tensor {
            shape: shape.to_vec(),
            data: vec![S::zero(); numel],
        }
    }

    pub fn full(shape: &[usize], value: S) -> Self {
        let numel: usize = shape.iter().product();
        Tensor {
            shape: shape.to_vec(),
            data: vec![value; numel],
        }
    }

    pub fn scalar(value: S) -> Self {
        Tensor {
            shape: vec![1],
            data: vec![value],
        }
    }

    /// Uniform entries in [lo, hi) from the given stream.
    pub fn rand_uniform(shape: &[usize], lo: f64, hi: f64, rng: &mut SplitMix64) -> Self {
        let numel: usize = shape.iter().product();
        let data = (0..numel)
            .map(|_| S::from_f64(rng.uniform(lo, hi)))
            .collect();
        Tensor {
            shape: shape.to_vec(),
            data,
        }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [S] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<S> {
        self.data
    }

    /// Interpret as batch × channels × height × width.
    pub fn dims4(&self) -> Result<[usize; 4]> {
        match *self.shape.as_slice() {
            [n, c, h, w] => Ok([n, c, h, w]),
            _ => Err(Error::shape(format!(
                "expected 4-d tensor, got shape {:?}",
                self.shape
            ))),
        }
    }

    pub fn dims2(&self) -> Result<[usize; 2]> {
        match *self.shape.as_slice() {
            [a, b] => Ok([a, b]),
            _ => Err(Error::shape(format!(
                "expected 2-d tensor, got shape {:?}",
                self.shape
            ))),
        }
    }

    pub fn reshape(mut self, shape: Vec<usize>) -> Result<Self> {
        let numel: usize = shape.iter().product();
        if numel != self.data.len() || shape.iter().any(|&d| d == 0) {
            return Err(Error::shape(format!(
                "cannot reshape {:?} ({} elems) to {shape:?}",
                self.shape,
                self.data.len()
            )));
        }
        self.shape = shape;
        Ok(self)
    }

    pub fn map(&self, f: impl Fn(S) -> S) -> Self {
        Tensor {
            shape: self.shape.clone(),
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(S, S) -> S) -> Result<Self> {
        if self.shape != other.shape {
            return Err(Error::shape(format!(
                "zip over {:?} vs {:?}",
                self.shape, other.shape
            )));
        }
        Ok(Tensor {
            shape: self.shape.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn add_assign(&mut self, other: &Self) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::shape(format!(
                "add over {:?} vs {:?}",
                self.shape, other.shape
            )));
        }
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        Ok(())
    }

    pub fn scale(&self, s: S) -> Self {
        self.map(|x| x * s)
    }

    pub fn sum(&self) -> S {
        self.data.iter().copied().sum()
    }

    /// Cast element-wise through f64 (training ↔ verification precision).
    pub fn cast<T: Scalar>(&self) -> Tensor<T> {
        Tensor {
            shape: self.shape.clone(),
            data: self.data.iter().map(|&x| T::from_f64(x.to_f64())).collect(),
        }
    }

    /// Concatenate along the channel axis (axis 1) of 4-d tensors.
    pub fn concat_channels(parts: &[&Tensor<S>]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::shape("concat of zero tensors"));
        }
        let [n, _, h, w] = parts[0].dims4()?;
        let mut total_c = 0usize;
        for p in parts {
            let [pn, pc, ph, pw] = p.dims4()?;
            if pn != n || ph != h || pw != w {
                return Err(Error::shape(format!(
                    "concat base {:?} vs part {:?}",
                    parts[0].shape, p.shape
                )));
            }
            total_c += pc;
        }
        let plane = h * w;
        let mut data = vec![S::zero(); n * total_c * plane];
        for b in 0..n {
            let mut c_off = 0usize;
            for p in parts {
                let pc = p.shape[1];
                let src = &p.data[b * pc * plane..(b + 1) * pc * plane];
                let dst = &mut data[(b * total_c + c_off) * plane..(b * total_c + c_off + pc) * plane];
                dst.copy_from_slice(src);
                c_off += pc;
            }
        }
        Tensor::new(vec![n, total_c, h, w], data)
    }

    /// Split a 4-d tensor into channel groups of the given widths.
    pub fn split_channels(&self, widths: &[usize]) -> Result<Vec<Tensor<S>>> {
        let [n, c, h, w] = self.dims4()?;
        if widths.iter().sum::<usize>() != c {
            return Err(Error::shape(format!(
                "split widths {widths:?} do not sum to {c}"
            )));
        }
        let plane = h * w;
        let mut out = Vec::with_capacity(widths.len());
        let mut c_off = 0usize;
        for &pc in widths {
            let mut data = vec![S::zero(); n * pc * plane];
            for b in 0..n {
                let src = &self.data[(b * c + c_off) * plane..(b * c + c_off + pc) * plane];
                data[b * pc * plane..(b + 1) * pc * plane].copy_from_slice(src);
            }
            out.push(Tensor::new(vec![n, pc, h, w], data)?);
            c_off += pc;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_rejects_zero_extent_and_wrong_len() {
        assert!(Tensor::<f32>::new(vec![2, 0], vec![]).is_err());
        assert!(Tensor::<f32>::new(vec![2, 2], vec![1.0; 3]).is_err());
    }

    #[test]
    fn concat_split_roundtrip() {
        let a = Tensor::<f32>::new(vec![1, 2, 2, 2], (0..8).map(|i| i as f32).collect()).unwrap();
        let b = Tensor::<f32>::new(vec![1, 1, 2, 2], (8..12).map(|i| i as f32).collect()).unwrap();
        let cat = Tensor::concat_channels(&[&a, &b]).unwrap();
        assert_eq!(cat.shape(), &[1, 3, 2, 2]);
        let parts = cat.split_channels(&[2, 1]).unwrap();
        assert_eq!(parts[0], a);
        assert_eq!(parts[1], b);
    }

    #[test]
    fn concat_batched() {
        let a = Tensor::<f32>::new(vec![2, 1, 1, 2], vec![1., 2., 3., 4.]).unwrap();
        let b = Tensor::<f32>::new(vec![2, 1, 1, 2], vec![5., 6., 7., 8.]).unwrap();
        let cat = Tensor::concat_channels(&[&a, &b]).unwrap();
        assert_eq!(cat.data(), &[1., 2., 5., 6., 3., 4., 7., 8.]);
    }

    #[test]
    fn cast_roundtrip() {
        let t = Tensor::<f32>::new(vec![3], vec![0.5, -1.25, 3.0]).unwrap();
        let d: Tensor<f64> = t.cast();
        let back: Tensor<f32> = d.cast();
        assert_eq!(t, back);
    }
}
