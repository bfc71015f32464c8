//! Gated recurrent unit classifier trained by backpropagation through time.
//!
//! A feature vector of length `input` is cut into consecutive chunks of
//! `step` features (the last chunk zero-padded); the chunks are the GRU
//! timesteps, starting from a zero hidden state. The final hidden state feeds
//! a softmax output layer. Per step:
//!
//! ```text
//! z  = sigmoid(Wz x + Uz h + bz)          update gate
//! r  = sigmoid(Wr x + Ur h + br)          reset gate
//! c  = tanh(Wc x + Uc (h * r) + bc)       candidate state
//! h' = (1 - z) * c + z * h
//! ```
//!
//! Parameters are stored flat, in this order, matrices row-major:
//! `Wz, Wr, Wc` (hidden × step), `Uz, Ur, Uc` (hidden × hidden),
//! `bz, br, bc` (hidden), `Wout` (classes × hidden), `bout` (classes).

use std::fs;
use std::path::Path;

use super::{check_training_data, cross_entropy, fit, init_uniform, softmax, training_rng};
use super::{Network, Prediction, TrainConfig, TrainReport};
use crate::data::LabeledDataset;
use crate::error::{Error, Result};
use crate::scalar::{sigmoid, Scalar};

/// Magic prefix of the binary parameter file.
pub const MODEL_MAGIC: &[u8; 11] = b"CBOSEL-GRU1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GruDims {
    /// Length of a full feature vector.
    pub input: usize,
    pub hidden: usize,
    pub classes: usize,
    /// Features per timestep (`1..=input`).
    pub step: usize,
}

impl GruDims {
    /// `chunk = None` uses one timestep covering the whole vector.
    pub fn new(input: usize, hidden: usize, classes: usize, chunk: Option<usize>) -> Result<Self> {
        if input == 0 || hidden == 0 || classes == 0 {
            return Err(Error::config("GRU dimensions must be positive"));
        }
        let step = match chunk {
            Some(0) => return Err(Error::config("chunk size must be positive")),
            Some(s) => s.min(input),
            None => input,
        };
        Ok(Self {
            input,
            hidden,
            classes,
            step,
        })
    }

    pub fn steps(&self) -> usize {
        self.input.div_ceil(self.step)
    }

    fn offsets(&self) -> Offsets {
        let (h, s, k) = (self.hidden, self.step, self.classes);
        let w = h * s;
        let u = h * h;
        let w_update = 0;
        let w_reset = w_update + w;
        let w_candidate = w_reset + w;
        let u_update = w_candidate + w;
        let u_reset = u_update + u;
        let u_candidate = u_reset + u;
        let b_update = u_candidate + u;
        let b_reset = b_update + h;
        let b_candidate = b_reset + h;
        let w_out = b_candidate + h;
        let b_out = w_out + k * h;
        Offsets {
            w_update,
            w_reset,
            w_candidate,
            u_update,
            u_reset,
            u_candidate,
            b_update,
            b_reset,
            b_candidate,
            w_out,
            b_out,
            total: b_out + k,
        }
    }

    pub fn n_params(&self) -> usize {
        self.offsets().total
    }
}

#[derive(Debug, Clone, Copy)]
struct Offsets {
    w_update: usize,
    w_reset: usize,
    w_candidate: usize,
    u_update: usize,
    u_reset: usize,
    u_candidate: usize,
    b_update: usize,
    b_reset: usize,
    b_candidate: usize,
    w_out: usize,
    b_out: usize,
    total: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GruParameters<T> {
    dims: GruDims,
    data: Vec<T>,
}

macro_rules! block {
    ($name:ident, $len:expr) => {
        pub fn $name(&self) -> &[T] {
            let o = self.dims.offsets();
            let len = $len(&self.dims);
            &self.data[o.$name..o.$name + len]
        }
    };
}

impl<T: Scalar> GruParameters<T> {
    pub fn zeros(dims: GruDims) -> Self {
        Self {
            dims,
            data: vec![T::zero(); dims.n_params()],
        }
    }

    /// Weights uniform in `±sqrt(1 / fan_in)` per matrix, biases zero.
    pub fn init<R: rand::Rng>(dims: GruDims, rng: &mut R) -> Self {
        let mut p = Self::zeros(dims);
        let o = dims.offsets();
        let (h, s, k) = (dims.hidden, dims.step, dims.classes);
        for start in [o.w_update, o.w_reset, o.w_candidate] {
            init_uniform(&mut p.data[start..start + h * s], s, rng);
        }
        for start in [o.u_update, o.u_reset, o.u_candidate] {
            init_uniform(&mut p.data[start..start + h * h], h, rng);
        }
        init_uniform(&mut p.data[o.w_out..o.w_out + k * h], h, rng);
        p
    }

    pub fn from_vec(dims: GruDims, data: Vec<T>) -> Result<Self> {
        if data.len() != dims.n_params() {
            return Err(Error::Shape {
                expected: dims.n_params(),
                found: data.len(),
            });
        }
        Ok(Self { dims, data })
    }

    pub fn dims(&self) -> GruDims {
        self.dims
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    block!(w_update, |d: &GruDims| d.hidden * d.step);
    block!(w_reset, |d: &GruDims| d.hidden * d.step);
    block!(w_candidate, |d: &GruDims| d.hidden * d.step);
    block!(u_update, |d: &GruDims| d.hidden * d.hidden);
    block!(u_reset, |d: &GruDims| d.hidden * d.hidden);
    block!(u_candidate, |d: &GruDims| d.hidden * d.hidden);
    block!(b_update, |d: &GruDims| d.hidden);
    block!(b_reset, |d: &GruDims| d.hidden);
    block!(b_candidate, |d: &GruDims| d.hidden);
    block!(w_out, |d: &GruDims| d.classes * d.hidden);
    block!(b_out, |d: &GruDims| d.classes);

    /// Mutable view of the update-gate bias.
    pub fn b_update_mut(&mut self) -> &mut [T] {
        let o = self.dims.offsets();
        &mut self.data[o.b_update..o.b_update + self.dims.hidden]
    }

    /// Mutable view of the output bias.
    pub fn b_out_mut(&mut self) -> &mut [T] {
        let o = self.dims.offsets();
        &mut self.data[o.b_out..o.b_out + self.dims.classes]
    }

    /// Serializes as magic, four little-endian `u32` dimensions
    /// (input, hidden, classes, step) and every parameter as a
    /// little-endian `f64` in storage order.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(MODEL_MAGIC.len() + 16 + 8 * self.data.len());
        out.extend_from_slice(MODEL_MAGIC);
        for d in [self.dims.input, self.dims.hidden, self.dims.classes, self.dims.step] {
            out.extend_from_slice(&(d as u32).to_le_bytes());
        }
        for v in &self.data {
            out.extend_from_slice(&v.as_f64().to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let rest = bytes
            .strip_prefix(MODEL_MAGIC.as_slice())
            .ok_or_else(|| Error::Format("missing CBOSEL-GRU1 magic".into()))?;
        if rest.len() < 16 {
            return Err(Error::Format("truncated header".into()));
        }
        let dim = |i: usize| u32::from_le_bytes(rest[4 * i..4 * i + 4].try_into().unwrap()) as usize;
        let (input, hidden, classes, step) = (dim(0), dim(1), dim(2), dim(3));
        if step == 0 || step > input {
            return Err(Error::Format(format!("chunk size {step} invalid for input {input}")));
        }
        let dims = GruDims::new(input, hidden, classes, Some(step)).map_err(|e| Error::Format(e.to_string()))?;
        let body = &rest[16..];
        if body.len() != 8 * dims.n_params() {
            return Err(Error::Format(format!(
                "expected {} parameter bytes, found {}",
                8 * dims.n_params(),
                body.len()
            )));
        }
        let data = body
            .chunks_exact(8)
            .map(|c| T::of(f64::from_le_bytes(c.try_into().unwrap())))
            .collect();
        Ok(Self { dims, data })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::from_bytes(&fs::read(path).map_err(|e| Error::io(path, e))?)
    }
}

/// Everything one cell step needs for its backward pass.
#[derive(Debug, Clone, PartialEq)]
pub struct CellCache<T> {
    pub input: Vec<T>,
    pub h_prev: Vec<T>,
    pub update: Vec<T>,
    pub reset: Vec<T>,
    pub candidate: Vec<T>,
    pub h: Vec<T>,
}

/// `out[r] += sum_c m[r, c] x[c]` for a row-major matrix with `x.len()` columns.
#[inline]
fn gemv_acc<T: Scalar>(out: &mut [T], m: &[T], x: &[T]) {
    let cols = x.len();
    for (o, row) in out.iter_mut().zip(m.chunks_exact(cols)) {
        *o += row.iter().zip(x).map(|(&a, &b)| a * b).sum::<T>();
    }
}

/// `out[c] += sum_r m[r, c] y[r]`.
#[inline]
fn gemv_t_acc<T: Scalar>(out: &mut [T], m: &[T], y: &[T]) {
    let cols = out.len();
    for (row, &yr) in m.chunks_exact(cols).zip(y) {
        for (o, &a) in out.iter_mut().zip(row) {
            *o += a * yr;
        }
    }
}

/// `g[r, c] += y[r] x[c]`.
#[inline]
fn outer_acc<T: Scalar>(g: &mut [T], y: &[T], x: &[T]) {
    let cols = x.len();
    for (row, &yr) in g.chunks_exact_mut(cols).zip(y) {
        for (o, &xc) in row.iter_mut().zip(x) {
            *o += yr * xc;
        }
    }
}

fn cell_step<T: Scalar>(params: &GruParameters<T>, x: &[T], h_prev: &[T]) -> CellCache<T> {
    let hdim = params.dims.hidden;
    let mut update = params.b_update().to_vec();
    gemv_acc(&mut update, params.w_update(), x);
    gemv_acc(&mut update, params.u_update(), h_prev);
    update.iter_mut().for_each(|v| *v = sigmoid(*v));

    let mut reset = params.b_reset().to_vec();
    gemv_acc(&mut reset, params.w_reset(), x);
    gemv_acc(&mut reset, params.u_reset(), h_prev);
    reset.iter_mut().for_each(|v| *v = sigmoid(*v));

    let gated: Vec<T> = h_prev.iter().zip(&reset).map(|(&h, &r)| h * r).collect();
    let mut candidate = params.b_candidate().to_vec();
    gemv_acc(&mut candidate, params.w_candidate(), x);
    gemv_acc(&mut candidate, params.u_candidate(), &gated);
    candidate.iter_mut().for_each(|v| *v = v.tanh());

    let h = (0..hdim)
        .map(|j| (T::one() - update[j]) * candidate[j] + update[j] * h_prev[j])
        .collect();
    CellCache {
        input: x.to_vec(),
        h_prev: h_prev.to_vec(),
        update,
        reset,
        candidate,
        h,
    }
}

/// One GRU step from `h_prev` on input `x` (length `dims.step`).
pub fn gru_cell_forward<T: Scalar>(params: &GruParameters<T>, x: &[T], h_prev: &[T]) -> Result<CellCache<T>> {
    let d = params.dims;
    if x.len() != d.step {
        return Err(Error::Shape {
            expected: d.step,
            found: x.len(),
        });
    }
    if h_prev.len() != d.hidden {
        return Err(Error::Shape {
            expected: d.hidden,
            found: h_prev.len(),
        });
    }
    if x.iter().chain(h_prev).any(|v| !v.is_finite()) {
        return Err(Error::data("non-finite GRU input"));
    }
    Ok(cell_step(params, x, h_prev))
}

/// Splits `sample` into `ceil(len / step)` chunks, zero-padding the last.
pub fn chunk_sequence<T: Scalar>(sample: &[T], step: usize) -> Result<Vec<Vec<T>>> {
    if step == 0 {
        return Err(Error::config("chunk size must be positive"));
    }
    Ok(sample
        .chunks(step)
        .map(|c| {
            let mut v = c.to_vec();
            v.resize(step, T::zero());
            v
        })
        .collect())
}

fn unroll<T: Scalar>(params: &GruParameters<T>, sample: &[T]) -> Vec<CellCache<T>> {
    let d = params.dims;
    let mut h = vec![T::zero(); d.hidden];
    let mut caches = Vec::with_capacity(d.steps());
    let mut padded = vec![T::zero(); d.step];
    for chunk in sample.chunks(d.step) {
        padded[..chunk.len()].copy_from_slice(chunk);
        padded[chunk.len()..].iter_mut().for_each(|v| *v = T::zero());
        let cache = cell_step(params, &padded, &h);
        h.clone_from(&cache.h);
        caches.push(cache);
    }
    caches
}

fn logits<T: Scalar>(params: &GruParameters<T>, h: &[T]) -> Vec<T> {
    let mut out = params.b_out().to_vec();
    gemv_acc(&mut out, params.w_out(), h);
    out
}

/// Hidden states after each timestep for one sample.
pub fn hidden_states<T: Scalar>(params: &GruParameters<T>, sample: &[T]) -> Vec<Vec<T>> {
    unroll(params, sample).into_iter().map(|c| c.h).collect()
}

/// Runs the whole sequence and applies the softmax output layer.
pub fn forward_sequence<T: Scalar>(params: &GruParameters<T>, sample: &[T]) -> Result<Prediction<T>> {
    if sample.len() != params.dims.input {
        return Err(Error::Shape {
            expected: params.dims.input,
            found: sample.len(),
        });
    }
    Ok(Prediction::from_probabilities(params.probabilities(sample)))
}

impl<T: Scalar> Network<T> for GruParameters<T> {
    fn n_features(&self) -> usize {
        self.dims.input
    }

    fn n_classes(&self) -> usize {
        self.dims.classes
    }

    fn params(&self) -> &[T] {
        &self.data
    }

    fn params_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    fn loss(&self, data: &LabeledDataset<T>, indices: &[usize]) -> T {
        let total: T = indices
            .iter()
            .map(|&i| {
                let caches = unroll(self, data.row(i));
                cross_entropy(&logits(self, &caches.last().unwrap().h), data.labels()[i])
            })
            .sum();
        total / T::of_usize(indices.len())
    }

    fn loss_and_gradients(&self, data: &LabeledDataset<T>, indices: &[usize], grad: &mut [T]) -> T {
        let d = self.dims;
        let o = d.offsets();
        let hd = d.hidden;
        grad.iter_mut().for_each(|g| *g = T::zero());
        let mut total = T::zero();
        let mut dh = vec![T::zero(); hd];
        let mut dh_prev = vec![T::zero(); hd];
        let mut da_update = vec![T::zero(); hd];
        let mut da_reset = vec![T::zero(); hd];
        let mut da_candidate = vec![T::zero(); hd];
        let mut d_gated = vec![T::zero(); hd];

        for &i in indices {
            let label = data.labels()[i];
            let caches = unroll(self, data.row(i));
            let h_last = &caches.last().unwrap().h;
            let z = logits(self, h_last);
            total += cross_entropy(&z, label);
            let mut dlogits = softmax(&z);
            dlogits[label] -= T::one();

            outer_acc(&mut grad[o.w_out..o.w_out + d.classes * hd], &dlogits, h_last);
            for (g, &v) in grad[o.b_out..o.b_out + d.classes].iter_mut().zip(&dlogits) {
                *g += v;
            }
            dh.iter_mut().for_each(|v| *v = T::zero());
            gemv_t_acc(&mut dh, self.w_out(), &dlogits);

            for c in caches.iter().rev() {
                for j in 0..hd {
                    let (u, cand, hp) = (c.update[j], c.candidate[j], c.h_prev[j]);
                    let dc = dh[j] * (T::one() - u);
                    let du = dh[j] * (hp - cand);
                    dh_prev[j] = dh[j] * u;
                    da_candidate[j] = dc * (T::one() - cand * cand);
                    da_update[j] = du * u * (T::one() - u);
                }
                let gated: Vec<T> = c.h_prev.iter().zip(&c.reset).map(|(&h, &r)| h * r).collect();
                outer_acc(
                    &mut grad[o.w_candidate..o.w_candidate + hd * d.step],
                    &da_candidate,
                    &c.input,
                );
                outer_acc(&mut grad[o.u_candidate..o.u_candidate + hd * hd], &da_candidate, &gated);
                d_gated.iter_mut().for_each(|v| *v = T::zero());
                gemv_t_acc(&mut d_gated, self.u_candidate(), &da_candidate);
                for j in 0..hd {
                    let r = c.reset[j];
                    da_reset[j] = d_gated[j] * c.h_prev[j] * r * (T::one() - r);
                    dh_prev[j] += d_gated[j] * r;
                }
                outer_acc(&mut grad[o.w_update..o.w_update + hd * d.step], &da_update, &c.input);
                outer_acc(&mut grad[o.u_update..o.u_update + hd * hd], &da_update, &c.h_prev);
                outer_acc(&mut grad[o.w_reset..o.w_reset + hd * d.step], &da_reset, &c.input);
                outer_acc(&mut grad[o.u_reset..o.u_reset + hd * hd], &da_reset, &c.h_prev);
                for j in 0..hd {
                    grad[o.b_update + j] += da_update[j];
                    grad[o.b_reset + j] += da_reset[j];
                    grad[o.b_candidate + j] += da_candidate[j];
                }
                gemv_t_acc(&mut dh_prev, self.u_update(), &da_update);
                gemv_t_acc(&mut dh_prev, self.u_reset(), &da_reset);
                std::mem::swap(&mut dh, &mut dh_prev);
            }
        }
        let n = T::of_usize(indices.len());
        grad.iter_mut().for_each(|g| *g /= n);
        total / n
    }

    fn probabilities(&self, sample: &[T]) -> Vec<T> {
        let caches = unroll(self, sample);
        softmax(&logits(self, &caches.last().unwrap().h))
    }
}

/// Initializes from `config.seed` and trains on `data`.
pub fn train<T: Scalar>(data: &LabeledDataset<T>, config: &TrainConfig) -> Result<(GruParameters<T>, TrainReport<T>)> {
    config.validate()?;
    if data.is_empty() {
        return Err(Error::data("training split is empty"));
    }
    let dims = GruDims::new(
        data.n_features(),
        config.hidden_dim,
        data.n_classes(),
        config.chunk_size,
    )?;
    check_training_data(data, dims.input)?;
    let mut rng = training_rng(config.seed);
    let mut params = GruParameters::init(dims, &mut rng);
    let report = fit(&mut params, data, config, &mut rng)?;
    Ok((params, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optim::seeded_rng;

    fn dims() -> GruDims {
        GruDims::new(6, 4, 3, Some(3)).unwrap()
    }

    #[test]
    fn layout_sizes() {
        let d = dims();
        assert_eq!(d.steps(), 2);
        assert_eq!(d.n_params(), 3 * 4 * 3 + 3 * 16 + 3 * 4 + 3 * 4 + 3);
        assert_eq!(GruDims::new(10, 2, 2, Some(4)).unwrap().steps(), 3);
        assert_eq!(GruDims::new(10, 2, 2, Some(40)).unwrap().steps(), 1);
        assert_eq!(GruDims::new(10, 2, 2, None).unwrap().steps(), 1);
        assert!(GruDims::new(10, 2, 2, Some(0)).is_err());
    }

    #[test]
    fn zero_weights_halve_state() {
        let p = GruParameters::<f64>::zeros(GruDims::new(3, 4, 2, None).unwrap());
        let h = [0.2, -0.4, 0.6, 0.9];
        let c = gru_cell_forward(&p, &[1.0, -2.0, 3.0], &h).unwrap();
        assert!(c.update.iter().all(|&u| u == 0.5));
        assert!(c.reset.iter().all(|&r| r == 0.5));
        assert!(c.candidate.iter().all(|&v| v == 0.0));
        for (a, b) in c.h.iter().zip(h) {
            assert_eq!(*a, 0.5 * b);
        }
    }

    #[test]
    fn saturated_update_gate_carries_state() {
        let mut p = GruParameters::init(GruDims::new(3, 4, 2, None).unwrap(), &mut seeded_rng(1));
        p.b_update_mut().iter_mut().for_each(|b| *b = f64::INFINITY);
        let h = [0.1, -0.3, 0.5, 0.7];
        let c = gru_cell_forward(&p, &[0.4, 0.2, -0.9], &h).unwrap();
        assert_eq!(c.h, h.to_vec());
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = GruParameters::<f64>::zeros(GruDims::new(3, 2, 2, None).unwrap());
        assert!(gru_cell_forward(&p, &[1.0, f64::NAN, 0.0], &[0.0, 0.0]).is_err());
        assert!(gru_cell_forward(&p, &[1.0, 0.0], &[0.0, 0.0]).is_err());
        assert!(forward_sequence(&p, &[1.0; 4]).is_err());
    }

    #[test]
    fn chunking_pads_last_step() {
        let x: Vec<f64> = (1..=10).map(f64::from).collect();
        let c = chunk_sequence(&x, 4).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c[2], vec![9.0, 10.0, 0.0, 0.0]);
        assert_eq!(chunk_sequence(&x, 10).unwrap().len(), 1);
        assert_eq!(chunk_sequence(&x, 64).unwrap().len(), 1);
        assert!(chunk_sequence(&x, 0).is_err());
    }

    #[test]
    fn probabilities_form_simplex() {
        let mut rng = seeded_rng(3);
        let p = GruParameters::init(GruDims::new(7, 5, 4, Some(2)).unwrap(), &mut rng);
        let pred = forward_sequence(&p, &[0.3, -1.0, 2.0, 0.0, 0.5, 0.1, -0.7]).unwrap();
        assert!((pred.probabilities.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(pred.probabilities.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn uniform_output_gives_ln_k_loss() {
        let p = GruParameters::<f64>::zeros(GruDims::new(2, 3, 5, None).unwrap());
        let ds = LabeledDataset::unnamed(vec![0.4, -0.2], 2, vec![3], 5).unwrap();
        let mut g = vec![0.0; p.dims().n_params()];
        let loss = p.loss_and_gradients(&ds, &[0], &mut g);
        assert!((loss - 5f64.ln()).abs() < 1e-12);
        assert!((p.loss(&ds, &[0]) - loss).abs() < 1e-15);
    }

    #[test]
    fn duplicated_batch_is_mean_invariant() {
        let mut rng = seeded_rng(8);
        let p = GruParameters::init(GruDims::new(4, 3, 2, Some(2)).unwrap(), &mut rng);
        let ds = LabeledDataset::unnamed(vec![0.1, 0.5, -0.3, 0.8, 0.9, -0.1, 0.2, 0.0], 4, vec![0, 1], 2).unwrap();
        let mut g1 = vec![0.0f64; p.dims().n_params()];
        let mut g2 = g1.clone();
        let l1 = p.loss_and_gradients(&ds, &[0, 1], &mut g1);
        let l2 = p.loss_and_gradients(&ds, &[0, 1, 0, 1], &mut g2);
        assert!((l1 - l2).abs() < 1e-15);
        for (a, b) in g1.iter().zip(&g2) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn binary_round_trip_and_header() {
        let mut rng = seeded_rng(4);
        let p = GruParameters::<f64>::init(GruDims::new(10, 3, 6, Some(4)).unwrap(), &mut rng);
        let bytes = p.to_bytes();
        assert_eq!(&bytes[..11], b"CBOSEL-GRU1");
        assert_eq!(&bytes[11..15], &10u32.to_le_bytes());
        assert_eq!(&bytes[15..19], &3u32.to_le_bytes());
        assert_eq!(&bytes[19..23], &6u32.to_le_bytes());
        assert_eq!(&bytes[23..27], &4u32.to_le_bytes());
        assert_eq!(bytes.len(), 27 + 8 * p.dims().n_params());
        assert_eq!(GruParameters::<f64>::from_bytes(&bytes).unwrap(), p);
        assert!(GruParameters::<f64>::from_bytes(&bytes[..bytes.len() - 1]).is_err());
        assert!(GruParameters::<f64>::from_bytes(b"CBOSEL-GRU2").is_err());
    }

    #[test]
    fn zero_epochs_returns_initialization() {
        let ds = LabeledDataset::unnamed(vec![0.0, 1.0, 1.0, 0.0], 2, vec![0, 1], 2).unwrap();
        let cfg = TrainConfig {
            epochs: 0,
            hidden_dim: 3,
            seed: 5,
            ..TrainConfig::default()
        };
        let (p, report) = train(&ds, &cfg).unwrap();
        let init = GruParameters::init(GruDims::new(2, 3, 2, None).unwrap(), &mut seeded_rng(5));
        assert_eq!(p, init);
        assert!(report.epoch_loss.is_empty());
    }
}
