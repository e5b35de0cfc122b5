//! Layer forward and backward passes.
//!
//! Convolution uses the cross-correlation convention (no kernel flip) with
//! zero padding. All backwards take the layer's original input and the
//! upstream gradient and return input/parameter gradients of matching
//! shapes.

use crate::error::{Error, Result};
use crate::numerics::scalar::Scalar;
use crate::numerics::tensor::Tensor;

/// Gradients produced by a convolution backward pass.
pub struct ConvGrads<S> {
    pub input: Tensor<S>,
    pub weights: Tensor<S>,
    pub bias: Tensor<S>,
}

/// Gradients produced by a linear backward pass.
pub struct LinearGrads<S> {
    pub input: Tensor<S>,
    pub weights: Tensor<S>,
    pub bias: Tensor<S>,
}

/// Argmax bookkeeping from a pooling pass: for every output cell, the flat
/// `h*W + w` position of the winning input pixel within its plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoolIndices {
    pub input_hw: (usize, usize),
    pub output_hw: (usize, usize),
    pub idx: Vec<usize>,
}

fn conv_out_dim(input: usize, kernel: usize, stride: usize, pad: usize) -> Result<usize> {
    let padded = input + 2 * pad;
    if padded < kernel {
        return Err(Error::shape(format!(
            "spatial dim {input} + 2*{pad} pad smaller than kernel {kernel}"
        )));
    }
    Ok((padded - kernel) / stride + 1)
}

/// Lower one batch item into the [in_ch*kH*kW, outH*outW] patch matrix.
#[allow(clippy::too_many_arguments)]
fn im2col<S: Scalar>(
    input: &[S],
    c_in: usize,
    h: usize,
    w: usize,
    kh: usize,
    kw: usize,
    stride: usize,
    pad: usize,
    out_h: usize,
    out_w: usize,
    col: &mut [S],
) {
    let positions = out_h * out_w;
    for c in 0..c_in {
        let plane = &input[c * h * w..(c + 1) * h * w];
        for ki in 0..kh {
            for kj in 0..kw {
                let row = (c * kh + ki) * kw + kj;
                let dst = &mut col[row * positions..(row + 1) * positions];
                for oh in 0..out_h {
                    let ih = (oh * stride + ki) as isize - pad as isize;
                    let base = oh * out_w;
                    if ih < 0 || ih >= h as isize {
                        dst[base..base + out_w].fill(S::zero());
                        continue;
                    }
                    let src_row = &plane[ih as usize * w..(ih as usize + 1) * w];
                    for ow in 0..out_w {
                        let iw = (ow * stride + kj) as isize - pad as isize;
                        dst[base + ow] = if iw < 0 || iw >= w as isize {
                            S::zero()
                        } else {
                            src_row[iw as usize]
                        };
                    }
                }
            }
        }
    }
}

/// Scatter-add the patch-matrix gradient back onto the input plane.
#[allow(clippy::too_many_arguments)]
fn col2im_add<S: Scalar>(
    col: &[S],
    c_in: usize,
    h: usize,
    w: usize,
    kh: usize,
    kw: usize,
    stride: usize,
    pad: usize,
    out_h: usize,
    out_w: usize,
    input_grad: &mut [S],
) {
    let positions = out_h * out_w;
    for c in 0..c_in {
        let plane = &mut input_grad[c * h * w..(c + 1) * h * w];
        for ki in 0..kh {
            for kj in 0..kw {
                let row = (c * kh + ki) * kw + kj;
                let src = &col[row * positions..(row + 1) * positions];
                for oh in 0..out_h {
                    let ih = (oh * stride + ki) as isize - pad as isize;
                    if ih < 0 || ih >= h as isize {
                        continue;
                    }
                    let base = oh * out_w;
                    for ow in 0..out_w {
                        let iw = (ow * stride + kj) as isize - pad as isize;
                        if iw >= 0 && iw < w as isize {
                            plane[ih as usize * w + iw as usize] += src[base + ow];
                        }
                    }
                }
            }
        }
    }
}

fn check_conv_shapes<S: Scalar>(
    input: &Tensor<S>,
    weights: &Tensor<S>,
    bias: &Tensor<S>,
    stride: usize,
) -> Result<([usize; 4], [usize; 4])> {
    let idims = input.dims4()?;
    let wdims = weights.dims4()?;
    if idims[1] != wdims[1] {
        return Err(Error::shape(format!(
            "conv input has {} channels, weights expect {}",
            idims[1], wdims[1]
        )));
    }
    if bias.shape() != [wdims[0]] {
        return Err(Error::shape(format!(
            "conv bias shape {:?}, expected [{}]",
            bias.shape(),
            wdims[0]
        )));
    }
    if stride == 0 {
        return Err(Error::shape("conv stride must be ≥ 1"));
    }
    Ok((idims, wdims))
}

/// 2-d cross-correlation. Weights are out_ch × in_ch × kH × kW; output
/// spatial dims are floor((H + 2·pad − k)/stride) + 1.
pub fn conv2d<S: Scalar>(
    input: &Tensor<S>,
    weights: &Tensor<S>,
    bias: &Tensor<S>,
    stride: usize,
    pad: usize,
) -> Result<Tensor<S>> {
    let ([n, c_in, h, w], [c_out, _, kh, kw]) = check_conv_shapes(input, weights, bias, stride)?;
    let out_h = conv_out_dim(h, kh, stride, pad)?;
    let out_w = conv_out_dim(w, kw, stride, pad)?;
    let positions = out_h * out_w;
    let k = c_in * kh * kw;

    let mut col = vec![S::zero(); k * positions];
    let mut out = vec![S::zero(); n * c_out * positions];
    for b in 0..n {
        im2col(
            &input.data()[b * c_in * h * w..(b + 1) * c_in * h * w],
            c_in,
            h,
            w,
            kh,
            kw,
            stride,
            pad,
            out_h,
            out_w,
            &mut col,
        );
        let dst = &mut out[b * c_out * positions..(b + 1) * c_out * positions];
        S::gemm(
            c_out,
            k,
            positions,
            S::one(),
            weights.data(),
            k as isize,
            1,
            &col,
            positions as isize,
            1,
            S::zero(),
            dst,
        );
        for oc in 0..c_out {
            let bv = bias.data()[oc];
            for v in &mut dst[oc * positions..(oc + 1) * positions] {
                *v += bv;
            }
        }
    }
    Tensor::new(vec![n, c_out, out_h, out_w], out)
}

/// Gradients of [`conv2d`] w.r.t. input, weights, and bias.
pub fn conv2d_backward<S: Scalar>(
    input: &Tensor<S>,
    weights: &Tensor<S>,
    stride: usize,
    pad: usize,
    grad_out: &Tensor<S>,
) -> Result<ConvGrads<S>> {
    let [n, c_in, h, w] = input.dims4()?;
    let [c_out, wc_in, kh, kw] = weights.dims4()?;
    if wc_in != c_in {
        return Err(Error::shape("conv backward channel mismatch"));
    }
    let out_h = conv_out_dim(h, kh, stride, pad)?;
    let out_w = conv_out_dim(w, kw, stride, pad)?;
    if grad_out.shape() != [n, c_out, out_h, out_w] {
        return Err(Error::shape(format!(
            "conv grad_out shape {:?}, expected {:?}",
            grad_out.shape(),
            [n, c_out, out_h, out_w]
        )));
    }
    let positions = out_h * out_w;
    let k = c_in * kh * kw;

    let mut col = vec![S::zero(); k * positions];
    let mut grad_col = vec![S::zero(); k * positions];
    let mut grad_input = vec![S::zero(); n * c_in * h * w];
    let mut grad_w = vec![S::zero(); c_out * k];
    let mut grad_b = vec![S::zero(); c_out];

    for b in 0..n {
        im2col(
            &input.data()[b * c_in * h * w..(b + 1) * c_in * h * w],
            c_in,
            h,
            w,
            kh,
            kw,
            stride,
            pad,
            out_h,
            out_w,
            &mut col,
        );
        let g = &grad_out.data()[b * c_out * positions..(b + 1) * c_out * positions];
        // dW[oc, r] += Σ_pos g[oc, pos] · col[r, pos]
        S::gemm(
            c_out,
            positions,
            k,
            S::one(),
            g,
            positions as isize,
            1,
            &col,
            1,
            positions as isize,
            S::one(),
            &mut grad_w,
        );
        // dCol[r, pos] = Σ_oc W[oc, r] · g[oc, pos]
        S::gemm(
            k,
            c_out,
            positions,
            S::one(),
            weights.data(),
            1,
            k as isize,
            g,
            positions as isize,
            1,
            S::zero(),
            &mut grad_col,
        );
        col2im_add(
            &grad_col,
            c_in,
            h,
            w,
            kh,
            kw,
            stride,
            pad,
            out_h,
            out_w,
            &mut grad_input[b * c_in * h * w..(b + 1) * c_in * h * w],
        );
        for oc in 0..c_out {
            grad_b[oc] += g[oc * positions..(oc + 1) * positions].iter().copied().sum();
        }
    }

    Ok(ConvGrads {
        input: Tensor::new(vec![n, c_in, h, w], grad_input)?,
        weights: Tensor::new(vec![c_out, c_in, kh, kw], grad_w)?,
        bias: Tensor::new(vec![c_out], grad_b)?,
    })
}

/// Elementwise max(0, x).
pub fn relu<S: Scalar>(input: &Tensor<S>) -> Tensor<S> {
    input.map(|x| if x > S::zero() { x } else { S::zero() })
}

/// Passes gradient only where the original input was strictly positive.
pub fn relu_backward<S: Scalar>(input: &Tensor<S>, grad_out: &Tensor<S>) -> Result<Tensor<S>> {
    input.zip_map(grad_out, |x, g| if x > S::zero() { g } else { S::zero() })
}

fn lrn_window_sums<S: Scalar>(
    data: &[S],
    n: usize,
    c: usize,
    plane: usize,
    radius: usize,
) -> Vec<S> {
    // sums[b, ch, p] = Σ_{ch' ∈ [ch-radius, ch+radius] ∩ [0, c)} x²
    let mut sums = vec![S::zero(); n * c * plane];
    for b in 0..n {
        let base = b * c * plane;
        for ch in 0..c {
            let lo = ch.saturating_sub(radius);
            let hi = (ch + radius).min(c - 1);
            let dst = &mut sums[base + ch * plane..base + (ch + 1) * plane];
            for src_ch in lo..=hi {
                let src = &data[base + src_ch * plane..base + (src_ch + 1) * plane];
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d += s * s;
                }
            }
        }
    }
    sums
}

/// Across-channel local response normalization:
/// b[c] = a[c] / (k + alpha·Σ_{c'∈window(c)} a[c']²)^beta with the window
/// clipped to valid channels.
pub fn lrn<S: Scalar>(
    input: &Tensor<S>,
    depth_radius: usize,
    k: f64,
    alpha: f64,
    beta: f64,
) -> Result<Tensor<S>> {
    let [n, c, h, w] = input.dims4()?;
    let plane = h * w;
    let kk = S::from_f64(k);
    let al = S::from_f64(alpha);
    let be = S::from_f64(beta);
    let sums = lrn_window_sums(input.data(), n, c, plane, depth_radius);
    let mut out = vec![S::zero(); input.len()];
    for (i, (&x, &s)) in input.data().iter().zip(&sums).enumerate() {
        let denom = kk + al * s;
        if denom <= S::zero() {
            return Err(Error::Numeric(format!(
                "lrn normalizer {} ≤ 0 at element {i}",
                denom.to_f64()
            )));
        }
        out[i] = x * denom.powf(-be);
    }
    Tensor::new(vec![n, c, h, w], out)
}

/// Gradient of [`lrn`] w.r.t. its input.
///
/// With D_i = k + alpha·S_i: da_j = g_j·D_j^{-β}
/// − 2αβ·a_j·Σ_{i ∈ window(j)} g_i·a_i·D_i^{-β-1}.
pub fn lrn_backward<S: Scalar>(
    input: &Tensor<S>,
    depth_radius: usize,
    k: f64,
    alpha: f64,
    beta: f64,
    grad_out: &Tensor<S>,
) -> Result<Tensor<S>> {
    let [n, c, h, w] = input.dims4()?;
    if grad_out.shape() != input.shape() {
        return Err(Error::shape("lrn grad_out shape mismatch"));
    }
    let plane = h * w;
    let kk = S::from_f64(k);
    let al = S::from_f64(alpha);
    let be = S::from_f64(beta);
    let two = S::from_f64(2.0);
    let sums = lrn_window_sums(input.data(), n, c, plane, depth_radius);

    // t[i] = g[i]·a[i]·D_i^{-β-1}, then window-sum t over channels.
    let x = input.data();
    let g = grad_out.data();
    let mut t = vec![S::zero(); input.len()];
    let mut grad = vec![S::zero(); input.len()];
    for i in 0..input.len() {
        let d = kk + al * sums[i];
        t[i] = g[i] * x[i] * d.powf(-be - S::one());
        grad[i] = g[i] * d.powf(-be);
    }
    for b in 0..n {
        let base = b * c * plane;
        for ch in 0..c {
            let lo = ch.saturating_sub(depth_radius);
            let hi = (ch + depth_radius).min(c - 1);
            for p in 0..plane {
                let mut acc = S::zero();
                for src_ch in lo..=hi {
                    acc += t[base + src_ch * plane + p];
                }
                let j = base + ch * plane + p;
                grad[j] = grad[j] - two * al * be * x[j] * acc;
            }
        }
    }
    Tensor::new(vec![n, c, h, w], grad)
}

/// Per-window max with argmax bookkeeping; ties go to the lowest flat index.
pub fn max_pool_with_indices<S: Scalar>(
    input: &Tensor<S>,
    kernel: usize,
    stride: usize,
) -> Result<(Tensor<S>, PoolIndices)> {
    max_pool_with_indices_padded(input, kernel, stride, 0)
}

/// Padded variant used by Inception pool branches. Padding is realized by
/// clipping each window to the valid input region, so the winning index
/// always refers to a real pixel.
pub fn max_pool_with_indices_padded<S: Scalar>(
    input: &Tensor<S>,
    kernel: usize,
    stride: usize,
    pad: usize,
) -> Result<(Tensor<S>, PoolIndices)> {
    let [n, c, h, w] = input.dims4()?;
    if h + 2 * pad < kernel || w + 2 * pad < kernel {
        return Err(Error::shape(format!(
            "pool kernel {kernel} larger than padded input {h}x{w}"
        )));
    }
    if stride == 0 {
        return Err(Error::shape("pool stride must be ≥ 1"));
    }
    let out_h = (h + 2 * pad - kernel) / stride + 1;
    let out_w = (w + 2 * pad - kernel) / stride + 1;
    let plane = h * w;
    let mut out = vec![S::zero(); n * c * out_h * out_w];
    let mut idx = vec![0usize; n * c * out_h * out_w];
    for b in 0..n {
        for ch in 0..c {
            let src = &input.data()[(b * c + ch) * plane..(b * c + ch + 1) * plane];
            let obase = (b * c + ch) * out_h * out_w;
            for oh in 0..out_h {
                for ow in 0..out_w {
                    let h0 = (oh * stride) as isize - pad as isize;
                    let w0 = (ow * stride) as isize - pad as isize;
                    let hs = h0.max(0) as usize;
                    let ws = w0.max(0) as usize;
                    let he = ((h0 + kernel as isize) as usize).min(h);
                    let we = ((w0 + kernel as isize) as usize).min(w);
                    let mut best = src[hs * w + ws];
                    let mut best_i = hs * w + ws;
                    for ih in hs..he {
                        for iw in ws..we {
                            let v = src[ih * w + iw];
                            if v > best {
                                best = v;
                                best_i = ih * w + iw;
                            }
                        }
                    }
                    out[obase + oh * out_w + ow] = best;
                    idx[obase + oh * out_w + ow] = best_i;
                }
            }
        }
    }
    Ok((
        Tensor::new(vec![n, c, out_h, out_w], out)?,
        PoolIndices {
            input_hw: (h, w),
            output_hw: (out_h, out_w),
            idx,
        },
    ))
}

/// Routes the upstream gradient entirely to each window's winning position.
pub fn max_pool_backward<S: Scalar>(
    indices: &PoolIndices,
    input_shape: &[usize],
    grad_out: &Tensor<S>,
) -> Result<Tensor<S>> {
    let [n, c, oh, ow] = grad_out.dims4()?;
    if (oh, ow) != indices.output_hw {
        return Err(Error::shape("pool backward output dims mismatch"));
    }
    let (h, w) = indices.input_hw;
    if input_shape != [n, c, h, w] {
        return Err(Error::shape("pool backward input shape mismatch"));
    }
    let plane = h * w;
    let mut grad = vec![S::zero(); n * c * plane];
    for cell in 0..n * c {
        let g = &grad_out.data()[cell * oh * ow..(cell + 1) * oh * ow];
        let ids = &indices.idx[cell * oh * ow..(cell + 1) * oh * ow];
        let dst = &mut grad[cell * plane..(cell + 1) * plane];
        for (gi, &i) in g.iter().zip(ids) {
            dst[i] += *gi;
        }
    }
    Tensor::new(vec![n, c, h, w], grad)
}

/// Scatters pooled values back to their recorded argmax positions, zeros
/// elsewhere. Inverse placement of a matching [`max_pool_with_indices`].
pub fn max_unpool<S: Scalar>(
    input: &Tensor<S>,
    indices: &PoolIndices,
    out_hw: (usize, usize),
) -> Result<Tensor<S>> {
    let [n, c, oh, ow] = input.dims4()?;
    if (oh, ow) != indices.output_hw {
        return Err(Error::shape(format!(
            "unpool input {oh}x{ow} does not match recorded pool output {:?}",
            indices.output_hw
        )));
    }
    if out_hw != indices.input_hw {
        return Err(Error::shape(format!(
            "unpool target {out_hw:?} does not match recorded pool input {:?}",
            indices.input_hw
        )));
    }
    let (h, w) = out_hw;
    let plane = h * w;
    if indices.idx.len() != n * c * oh * ow {
        return Err(Error::Corrupt(format!(
            "index map has {} entries, expected {}",
            indices.idx.len(),
            n * c * oh * ow
        )));
    }
    let mut out = vec![S::zero(); n * c * plane];
    for cell in 0..n * c {
        let src = &input.data()[cell * oh * ow..(cell + 1) * oh * ow];
        let ids = &indices.idx[cell * oh * ow..(cell + 1) * oh * ow];
        let dst = &mut out[cell * plane..(cell + 1) * plane];
        for (v, &i) in src.iter().zip(ids) {
            if i >= plane {
                return Err(Error::Corrupt(format!(
                    "unpool index {i} out of range for {h}x{w} plane"
                )));
            }
            dst[i] = *v;
        }
    }
    Tensor::new(vec![n, c, h, w], out)
}

/// Gradient of [`max_unpool`]: gather at the recorded positions.
pub fn max_unpool_backward<S: Scalar>(
    indices: &PoolIndices,
    grad_out: &Tensor<S>,
) -> Result<Tensor<S>> {
    let [n, c, h, w] = grad_out.dims4()?;
    if (h, w) != indices.input_hw {
        return Err(Error::shape("unpool backward dims mismatch"));
    }
    let (oh, ow) = indices.output_hw;
    let plane = h * w;
    let mut grad = vec![S::zero(); n * c * oh * ow];
    for cell in 0..n * c {
        let src = &grad_out.data()[cell * plane..(cell + 1) * plane];
        let ids = &indices.idx[cell * oh * ow..(cell + 1) * oh * ow];
        let dst = &mut grad[cell * oh * ow..(cell + 1) * oh * ow];
        for (d, &i) in dst.iter_mut().zip(ids) {
            *d = src[i];
        }
    }
    Tensor::new(vec![n, c, oh, ow], grad)
}

/// Per-channel spatial mean; batch × channels output.
pub fn global_avg_pool<S: Scalar>(input: &Tensor<S>) -> Result<Tensor<S>> {
    let [n, c, h, w] = input.dims4()?;
    let plane = h * w;
    let inv = S::from_f64(1.0 / plane as f64);
    let mut out = vec![S::zero(); n * c];
    for cell in 0..n * c {
        let s: S = input.data()[cell * plane..(cell + 1) * plane]
            .iter()
            .copied()
            .sum();
        out[cell] = s * inv;
    }
    Tensor::new(vec![n, c], out)
}

/// Gradient of [`global_avg_pool`]: uniform 1/(H·W) per spatial cell.
pub fn global_avg_pool_backward<S: Scalar>(
    input_shape: &[usize],
    grad_out: &Tensor<S>,
) -> Result<Tensor<S>> {
    let [n, c] = grad_out.dims2()?;
    let (h, w) = match *input_shape {
        [gn, gc, h, w] if gn == n && gc == c => (h, w),
        _ => return Err(Error::shape("gap backward shape mismatch")),
    };
    let plane = h * w;
    let inv = S::from_f64(1.0 / plane as f64);
    let mut grad = vec![S::zero(); n * c * plane];
    for cell in 0..n * c {
        let g = grad_out.data()[cell] * inv;
        grad[cell * plane..(cell + 1) * plane].fill(g);
    }
    Tensor::new(vec![n, c, h, w], grad)
}

/// Affine map y = Wx + b over batch rows. Input batch × in, weights out × in.
pub fn linear<S: Scalar>(
    input: &Tensor<S>,
    weights: &Tensor<S>,
    bias: &Tensor<S>,
) -> Result<Tensor<S>> {
    let [n, d_in] = input.dims2()?;
    let [d_out, wd_in] = weights.dims2()?;
    if wd_in != d_in {
        return Err(Error::shape(format!(
            "linear input dim {d_in} vs weight dim {wd_in}"
        )));
    }
    if bias.shape() != [d_out] {
        return Err(Error::shape("linear bias shape mismatch"));
    }
    let mut out = vec![S::zero(); n * d_out];
    // out[n, o] = Σ_i x[n, i]·W[o, i] → X(n×in) · W^T(in×out)
    S::gemm(
        n,
        d_in,
        d_out,
        S::one(),
        input.data(),
        d_in as isize,
        1,
        weights.data(),
        1,
        d_in as isize,
        S::zero(),
        &mut out,
    );
    for row in 0..n {
        for o in 0..d_out {
            out[row * d_out + o] += bias.data()[o];
        }
    }
    Tensor::new(vec![n, d_out], out)
}

/// Gradients of [`linear`] w.r.t. input, weights, and bias.
pub fn linear_backward<S: Scalar>(
    input: &Tensor<S>,
    weights: &Tensor<S>,
    grad_out: &Tensor<S>,
) -> Result<LinearGrads<S>> {
    let [n, d_in] = input.dims2()?;
    let [d_out, _] = weights.dims2()?;
    if grad_out.shape() != [n, d_out] {
        return Err(Error::shape("linear grad_out shape mismatch"));
    }
    // dX = G · W
    let mut grad_in = vec![S::zero(); n * d_in];
    S::gemm(
        n,
        d_out,
        d_in,
        S::one(),
        grad_out.data(),
        d_out as isize,
        1,
        weights.data(),
        d_in as isize,
        1,
        S::zero(),
        &mut grad_in,
    );
    // dW = G^T · X
    let mut grad_w = vec![S::zero(); d_out * d_in];
    S::gemm(
        d_out,
        n,
        d_in,
        S::one(),
        grad_out.data(),
        1,
        d_out as isize,
        input.data(),
        d_in as isize,
        1,
        S::zero(),
        &mut grad_w,
    );
    let mut grad_b = vec![S::zero(); d_out];
    for row in 0..n {
        for o in 0..d_out {
            grad_b[o] += grad_out.data()[row * d_out + o];
        }
    }
    Ok(LinearGrads {
        input: Tensor::new(vec![n, d_in], grad_in)?,
        weights: Tensor::new(vec![d_out, d_in], grad_w)?,
        bias: Tensor::new(vec![d_out], grad_b)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t4(n: usize, c: usize, h: usize, w: usize, data: Vec<f64>) -> Tensor<f64> {
        Tensor::new(vec![n, c, h, w], data).unwrap()
    }

    #[test]
    fn conv_identity_kernel() {
        let x = t4(1, 1, 3, 3, (1..=9).map(|v| v as f64).collect());
        let w = t4(1, 1, 1, 1, vec![1.0]);
        let b = Tensor::new(vec![1], vec![0.0]).unwrap();
        let y = conv2d(&x, &w, &b, 1, 0).unwrap();
        assert_eq!(y, x);
    }

    #[test]
    fn conv_direct_arithmetic() {
        // 2x2 input [[1,2],[3,4]], identity-diagonal 2x2 kernel, bias 0.5 → 1+4+0.5
        let x = t4(1, 1, 2, 2, vec![1.0, 2.0, 3.0, 4.0]);
        let w = t4(1, 1, 2, 2, vec![1.0, 0.0, 0.0, 1.0]);
        let b = Tensor::new(vec![1], vec![0.5]).unwrap();
        let y = conv2d(&x, &w, &b, 1, 0).unwrap();
        assert_eq!(y.shape(), &[1, 1, 1, 1]);
        assert!((y.data()[0] - 5.5).abs() < 1e-12);
    }

    #[test]
    fn conv_stride_and_pad_dims() {
        let x = Tensor::<f64>::zeros(&[1, 2, 5, 7]);
        let w = Tensor::<f64>::zeros(&[3, 2, 3, 3]);
        let b = Tensor::<f64>::zeros(&[3]);
        let y = conv2d(&x, &w, &b, 2, 1).unwrap();
        // floor((5+2-3)/2)+1 = 3, floor((7+2-3)/2)+1 = 4
        assert_eq!(y.shape(), &[1, 3, 3, 4]);
    }

    #[test]
    fn conv_channel_mismatch_is_error() {
        let x = Tensor::<f64>::zeros(&[1, 2, 3, 3]);
        let w = Tensor::<f64>::zeros(&[1, 3, 1, 1]);
        let b = Tensor::<f64>::zeros(&[1]);
        assert!(conv2d(&x, &w, &b, 1, 0).is_err());
    }

    #[test]
    fn relu_examples() {
        let x = Tensor::new(vec![3], vec![-1.0, 0.0, 2.0]).unwrap();
        assert_eq!(relu(&x).data(), &[0.0, 0.0, 2.0]);
        let pos = Tensor::new(vec![2], vec![0.5, 3.0]).unwrap();
        assert_eq!(relu(&pos), pos);
        // gradient is zero exactly at x == 0
        let g = Tensor::new(vec![3], vec![1.0, 1.0, 1.0]).unwrap();
        assert_eq!(relu_backward(&x, &g).unwrap().data(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn lrn_alpha_zero_is_identity() {
        let x = t4(1, 3, 2, 2, (0..12).map(|v| v as f64 - 5.0).collect());
        let y = lrn(&x, 2, 1.0, 0.0, 0.75).unwrap();
        for (a, b) in x.data().iter().zip(y.data()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn lrn_single_channel_value() {
        let x = t4(1, 1, 1, 1, vec![2.0]);
        let y = lrn(&x, 0, 1.0, 1.0, 0.5).unwrap();
        assert!((y.data()[0] - 2.0 / 5.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn pool_basic_and_tie_rule() {
        let x = t4(1, 1, 2, 2, vec![1.0, 2.0, 3.0, 4.0]);
        let (y, idx) = max_pool_with_indices(&x, 2, 2).unwrap();
        assert_eq!(y.data(), &[4.0]);
        assert_eq!(idx.idx, vec![3]); // position (1,1)

        let flat = t4(1, 1, 2, 4, vec![7.0; 8]);
        let (_, idx) = max_pool_with_indices(&flat, 2, 2).unwrap();
        assert_eq!(idx.idx, vec![0, 2]); // first position of each window
    }

    #[test]
    fn unpool_scatters_max_to_origin() {
        let x = t4(1, 1, 2, 2, vec![1.0, 2.0, 3.0, 4.0]);
        let (y, idx) = max_pool_with_indices(&x, 2, 2).unwrap();
        let up = max_unpool(&y, &idx, (2, 2)).unwrap();
        assert_eq!(up.data(), &[0.0, 0.0, 0.0, 4.0]);

        let z = Tensor::<f64>::zeros(&[1, 1, 1, 1]);
        let up0 = max_unpool(&z, &idx, (2, 2)).unwrap();
        assert!(up0.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn unpool_rejects_out_of_range_index() {
        let pooled = t4(1, 1, 1, 1, vec![5.0]);
        let bad = PoolIndices {
            input_hw: (2, 2),
            output_hw: (1, 1),
            idx: vec![9],
        };
        assert!(matches!(
            max_unpool(&pooled, &bad, (2, 2)),
            Err(crate::error::Error::Corrupt(_))
        ));
    }

    #[test]
    fn padded_pool_preserves_dims() {
        let x = t4(1, 1, 5, 5, (0..25).map(|v| v as f64).collect());
        let (y, _) = max_pool_with_indices_padded(&x, 3, 1, 1).unwrap();
        assert_eq!(y.shape(), &[1, 1, 5, 5]);
        // corner window clips to 2x2 of {0,1,5,6} → 6
        assert_eq!(y.data()[0], 6.0);
    }

    #[test]
    fn gap_examples() {
        let c = Tensor::<f64>::full(&[2, 3, 4, 4], 2.5);
        let y = global_avg_pool(&c).unwrap();
        assert!(y.data().iter().all(|&v| v == 2.5));

        let x = t4(1, 1, 2, 2, vec![1.0, 3.0, 5.0, 7.0]);
        let y = global_avg_pool(&x).unwrap();
        assert_eq!(y.data(), &[4.0]);
    }

    #[test]
    fn linear_examples() {
        let eye = Tensor::new(vec![2, 2], vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        let b0 = Tensor::<f64>::zeros(&[2]);
        let x = Tensor::new(vec![1, 2], vec![3.0, 4.0]).unwrap();
        assert_eq!(linear(&x, &eye, &b0).unwrap(), x);

        let w = Tensor::new(vec![1, 2], vec![1.0, 2.0]).unwrap();
        let b = Tensor::new(vec![1], vec![0.5]).unwrap();
        let y = linear(&x, &w, &b).unwrap();
        assert!((y.data()[0] - 11.5).abs() < 1e-12);
    }
}
