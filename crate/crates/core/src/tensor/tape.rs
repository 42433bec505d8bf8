use super::kernels::{self, ConvGeom};
use super::Tensor;
use crate::error::{Error, Result};

/// Handle to a value recorded on a [`Tape`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Var(usize);

enum Op {
    Leaf,
    Conv2d {
        input: Var,
        kernel: Var,
        bias: Var,
        geom: ConvGeom,
        /// im2col buffers, one per batch item; empty when no gradient flows.
        cols: Vec<f32>,
    },
    /// Max-style pooling: every output element copies one input element.
    Gather { input: Var, argmax: Vec<u32> },
    Dense { input: Var, weight: Var, bias: Var },
    Relu { input: Var },
    HardSigmoid { input: Var },
    Mse { pred: Var, target: Var },
    Sum { input: Var },
}

struct Node {
    value: Tensor,
    grad: Option<Vec<f32>>,
    requires_grad: bool,
    op: Op,
}

/// Records a forward computation for one reverse pass.
///
/// Nodes are appended in evaluation order, so every input precedes its
/// consumer and the backward pass is a single reverse sweep.
#[derive(Default)]
pub struct Tape {
    nodes: Vec<Node>,
    consumed: bool,
}

impl Tape {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// A trainable input whose gradient is accumulated.
    pub fn param(&mut self, value: Tensor) -> Var {
        self.push(value, true, Op::Leaf)
    }

    /// A constant input.
    pub fn constant(&mut self, value: Tensor) -> Var {
        self.push(value, false, Op::Leaf)
    }

    pub fn value(&self, v: Var) -> &Tensor {
        &self.nodes[v.0].value
    }

    /// Gradient of the last backward target with respect to `v`.
    pub fn grad(&self, v: Var) -> Option<&[f32]> {
        self.nodes[v.0].grad.as_deref()
    }

    pub fn take_grad(&mut self, v: Var) -> Option<Vec<f32>> {
        self.nodes[v.0].grad.take()
    }

    fn push(&mut self, value: Tensor, requires_grad: bool, op: Op) -> Var {
        self.nodes.push(Node {
            value,
            grad: None,
            requires_grad,
            op,
        });
        Var(self.nodes.len() - 1)
    }

    fn tracked(&self, v: Var) -> bool {
        self.nodes[v.0].requires_grad
    }

    /// Stride-1 cross-correlation with zero padding `pad` on every side.
    ///
    /// `input` is `[B, Cin, H, W]`, `kernel` `[Cout, Cin, k, k]`, `bias`
    /// `[Cout]`; the result is `[B, Cout, H + 2·pad - k + 1, W + 2·pad - k + 1]`.
    pub fn conv2d(&mut self, input: Var, kernel: Var, bias: Var, pad: usize) -> Result<Var> {
        let xs = self.value(input).shape().to_vec();
        let ks = self.value(kernel).shape().to_vec();
        let bs = self.value(bias).shape().to_vec();
        if xs.len() != 4 || ks.len() != 4 || ks[2] != ks[3] {
            return Err(Error::Shape(format!("conv2d input {xs:?} kernel {ks:?}")));
        }
        let (b, cin, h, w) = (xs[0], xs[1], xs[2], xs[3]);
        let (cout, k) = (ks[0], ks[2]);
        if ks[1] != cin {
            return Err(Error::Shape(format!(
                "conv2d kernel expects {} input channels, got {cin}",
                ks[1]
            )));
        }
        if bs != [cout] {
            return Err(Error::Shape(format!("conv2d bias {bs:?} for {cout} channels")));
        }
        if h + 2 * pad < k || w + 2 * pad < k {
            return Err(Error::Shape(format!(
                "conv2d input {h}x{w} is smaller than kernel {k} with padding {pad}"
            )));
        }
        let geom = ConvGeom { cin, h, w, k, pad };
        let (ho, wo) = (geom.out_h(), geom.out_w());
        let needs_grad = self.tracked(input) || self.tracked(kernel) || self.tracked(bias);
        let keep_cols = self.tracked(kernel);
        let mut out = vec![0.0f32; b * cout * ho * wo];
        let mut cols_all = if keep_cols {
            vec![0.0f32; b * geom.col_len()]
        } else {
            Vec::new()
        };
        let mut scratch = if keep_cols {
            Vec::new()
        } else {
            vec![0.0f32; geom.col_len()]
        };
        {
            let x = self.value(input).data();
            let kw = self.value(kernel).data();
            let bias_v = self.value(bias).data();
            let plane_in = cin * h * w;
            let plane_out = cout * ho * wo;
            for bi in 0..b {
                let cols: &mut [f32] = if keep_cols {
                    &mut cols_all[bi * geom.col_len()..(bi + 1) * geom.col_len()]
                } else {
                    &mut scratch
                };
                kernels::im2col(&geom, &x[bi * plane_in..(bi + 1) * plane_in], cols);
                let o = &mut out[bi * plane_out..(bi + 1) * plane_out];
                for (c, chunk) in o.chunks_mut(ho * wo).enumerate() {
                    chunk.fill(bias_v[c]);
                }
                kernels::gemm(cout, geom.col_rows(), ho * wo, kw, false, cols, false, 1.0, o);
            }
        }
        let value = Tensor::new(&[b, cout, ho, wo], out)?;
        Ok(self.push(
            value,
            needs_grad,
            Op::Conv2d {
                input,
                kernel,
                bias,
                geom,
                cols: cols_all,
            },
        ))
    }

    /// 2×2 max pooling with stride 2; trailing odd rows/columns are dropped.
    pub fn maxpool2d(&mut self, input: Var) -> Result<Var> {
        let s = self.value(input).shape().to_vec();
        if s.len() != 4 || s[2] < 2 || s[3] < 2 {
            return Err(Error::Shape(format!("maxpool2d needs [B,C,H>=2,W>=2], got {s:?}")));
        }
        let (planes, h, w) = (s[0] * s[1], s[2], s[3]);
        let (oh, ow) = (h / 2, w / 2);
        let mut out = vec![0.0f32; planes * oh * ow];
        let mut argmax = vec![0u32; planes * oh * ow];
        let x = self.value(input).data();
        for p in 0..planes {
            kernels::maxpool2_plane(
                &x[p * h * w..(p + 1) * h * w],
                h,
                w,
                &mut out[p * oh * ow..(p + 1) * oh * ow],
                &mut argmax[p * oh * ow..(p + 1) * oh * ow],
                p * h * w,
            );
        }
        let value = Tensor::new(&[s[0], s[1], oh, ow], out)?;
        let rg = self.tracked(input);
        Ok(self.push(value, rg, Op::Gather { input, argmax }))
    }

    /// Max over each of `bins × bins` adaptive bins per plane.
    pub fn adaptive_max_pool(&mut self, input: Var, bins: usize) -> Result<Var> {
        let s = self.value(input).shape().to_vec();
        if s.len() != 4 || s[2] == 0 || s[3] == 0 || bins == 0 {
            return Err(Error::Shape(format!(
                "adaptive_max_pool needs [B,C,H>=1,W>=1] and bins >= 1, got {s:?}, {bins}"
            )));
        }
        let (planes, h, w) = (s[0] * s[1], s[2], s[3]);
        let per = bins * bins;
        let mut out = vec![0.0f32; planes * per];
        let mut argmax = vec![0u32; planes * per];
        let x = self.value(input).data();
        for p in 0..planes {
            kernels::adaptive_plane(
                &x[p * h * w..(p + 1) * h * w],
                h,
                w,
                bins,
                &mut out[p * per..(p + 1) * per],
                &mut argmax[p * per..(p + 1) * per],
                p * h * w,
            );
        }
        let value = Tensor::new(&[s[0], s[1], bins, bins], out)?;
        let rg = self.tracked(input);
        Ok(self.push(value, rg, Op::Gather { input, argmax }))
    }

    /// Spatial pyramid pooling: `[B, L, H, W] -> [B, L·Σ levels²]`.
    ///
    /// Each sample's vector is level-major, then channel, then row-major bin.
    pub fn spp(&mut self, input: Var, levels: &[usize]) -> Result<Var> {
        let s = self.value(input).shape().to_vec();
        if s.len() != 4 || s[2] == 0 || s[3] == 0 || levels.is_empty() || levels.contains(&0) {
            return Err(Error::Shape(format!("spp input {s:?} levels {levels:?}")));
        }
        let (b, c, h, w) = (s[0], s[1], s[2], s[3]);
        let width = kernels::pyramid_width(levels, c);
        let mut out = vec![0.0f32; b * width];
        let mut argmax = vec![0u32; b * width];
        let x = self.value(input).data();
        for bi in 0..b {
            let mut offset = bi * width;
            for &level in levels {
                let per = level * level;
                for ci in 0..c {
                    let p = bi * c + ci;
                    kernels::adaptive_plane(
                        &x[p * h * w..(p + 1) * h * w],
                        h,
                        w,
                        level,
                        &mut out[offset..offset + per],
                        &mut argmax[offset..offset + per],
                        p * h * w,
                    );
                    offset += per;
                }
            }
        }
        let value = Tensor::new(&[b, width], out)?;
        let rg = self.tracked(input);
        Ok(self.push(value, rg, Op::Gather { input, argmax }))
    }

    /// Affine map `[B, F] · [F, G] + [G]`.
    pub fn dense(&mut self, input: Var, weight: Var, bias: Var) -> Result<Var> {
        let xs = self.value(input).shape().to_vec();
        let ws = self.value(weight).shape().to_vec();
        let bs = self.value(bias).shape().to_vec();
        if xs.len() != 2 || ws.len() != 2 || xs[1] != ws[0] || bs != [ws[1]] {
            return Err(Error::Shape(format!(
                "dense input {xs:?} weight {ws:?} bias {bs:?}"
            )));
        }
        let (b, f, g) = (xs[0], xs[1], ws[1]);
        let mut out = Vec::with_capacity(b * g);
        for _ in 0..b {
            out.extend_from_slice(self.value(bias).data());
        }
        kernels::gemm(
            b,
            f,
            g,
            self.value(input).data(),
            false,
            self.value(weight).data(),
            false,
            1.0,
            &mut out,
        );
        let value = Tensor::new(&[b, g], out)?;
        let rg = self.tracked(input) || self.tracked(weight) || self.tracked(bias);
        Ok(self.push(value, rg, Op::Dense {
            input,
            weight,
            bias,
        }))
    }

    pub fn relu(&mut self, input: Var) -> Var {
        let x = self.value(input);
        let data = x.data().iter().map(|&v| v.max(0.0)).collect();
        let value = Tensor::new(x.shape(), data).expect("same shape");
        let rg = self.tracked(input);
        self.push(value, rg, Op::Relu { input })
    }

    /// `clamp(0.2·x + 0.5, 0, 1)`.
    pub fn hard_sigmoid(&mut self, input: Var) -> Var {
        let x = self.value(input);
        let data = x.data().iter().map(|&v| hard_sigmoid(v)).collect();
        let value = Tensor::new(x.shape(), data).expect("same shape");
        let rg = self.tracked(input);
        self.push(value, rg, Op::HardSigmoid { input })
    }

    /// Mean squared difference over all elements, as a scalar.
    pub fn mse_loss(&mut self, pred: Var, target: Var) -> Result<Var> {
        let (p, t) = (self.value(pred), self.value(target));
        if p.shape() != t.shape() {
            return Err(Error::Shape(format!(
                "mse_loss {:?} vs {:?}",
                p.shape(),
                t.shape()
            )));
        }
        let sum: f64 = p
            .data()
            .iter()
            .zip(t.data())
            .map(|(&a, &b)| {
                let d = f64::from(a) - f64::from(b);
                d * d
            })
            .sum();
        let value = Tensor::scalar((sum / p.len().max(1) as f64) as f32);
        let rg = self.tracked(pred) || self.tracked(target);
        Ok(self.push(value, rg, Op::Mse { pred, target }))
    }

    pub fn sum(&mut self, input: Var) -> Var {
        let total: f64 = self.value(input).data().iter().map(|&v| f64::from(v)).sum();
        let rg = self.tracked(input);
        self.push(Tensor::scalar(total as f32), rg, Op::Sum { input })
    }

    /// Reverse pass from a scalar `loss`.
    pub fn backward(&mut self, loss: Var) -> Result<()> {
        let shape = self.value(loss).shape().to_vec();
        if self.value(loss).len() != 1 {
            return Err(Error::NonScalarLoss(shape));
        }
        self.backward_with(loss, &[1.0])
    }

    /// Reverse pass seeded with an arbitrary upstream gradient for `output`
    /// (a vector-Jacobian product).
    pub fn backward_with(&mut self, output: Var, seed: &[f32]) -> Result<()> {
        if self.consumed {
            return Err(Error::TapeConsumed);
        }
        if seed.len() != self.value(output).len() {
            return Err(Error::Shape(format!(
                "seed gradient of length {} for output of length {}",
                seed.len(),
                self.value(output).len()
            )));
        }
        self.consumed = true;
        for node in &mut self.nodes {
            node.grad = None;
        }
        self.nodes[output.0].grad = Some(seed.to_vec());
        for i in (0..=output.0).rev() {
            let (before, rest) = self.nodes.split_at_mut(i);
            let node = &mut rest[0];
            let op = std::mem::replace(&mut node.op, Op::Leaf);
            if !node.requires_grad {
                continue;
            }
            let Some(grad) = node.grad.as_deref() else {
                // leaves keep their gradients; interior nodes without one
                // do not lie on a path to the output
                continue;
            };
            backprop(before, &node.value, grad, op);
        }
        Ok(())
    }
}

fn hard_sigmoid(v: f32) -> f32 {
    (0.2 * v + 0.5).clamp(0.0, 1.0)
}

/// Gradient buffer of an earlier node, allocated on first use; `None` when
/// the node does not track gradients.
fn grad_of(nodes: &mut [Node], v: Var) -> Option<&mut Vec<f32>> {
    let node = &mut nodes[v.0];
    if !node.requires_grad {
        return None;
    }
    let len = node.value.len();
    Some(node.grad.get_or_insert_with(|| vec![0.0; len]))
}

fn backprop(nodes: &mut [Node], out: &Tensor, grad: &[f32], op: Op) {
    match op {
        Op::Leaf => {}
        Op::Gather { input, argmax } => {
            if let Some(g) = grad_of(nodes, input) {
                for (&idx, &d) in argmax.iter().zip(grad) {
                    g[idx as usize] += d;
                }
            }
        }
        Op::Relu { input } => {
            let x = nodes[input.0].value.data().to_vec();
            if let Some(g) = grad_of(nodes, input) {
                for ((gi, &xi), &d) in g.iter_mut().zip(&x).zip(grad) {
                    if xi > 0.0 {
                        *gi += d;
                    }
                }
            }
        }
        Op::HardSigmoid { input } => {
            let x = nodes[input.0].value.data().to_vec();
            if let Some(g) = grad_of(nodes, input) {
                for ((gi, &xi), &d) in g.iter_mut().zip(&x).zip(grad) {
                    if xi > -2.5 && xi < 2.5 {
                        *gi += 0.2 * d;
                    }
                }
            }
        }
        Op::Sum { input } => {
            if let Some(g) = grad_of(nodes, input) {
                for gi in g.iter_mut() {
                    *gi += grad[0];
                }
            }
        }
        Op::Mse { pred, target } => {
            let p = nodes[pred.0].value.data().to_vec();
            let t = nodes[target.0].value.data().to_vec();
            let scale = 2.0 * grad[0] / p.len().max(1) as f32;
            if let Some(g) = grad_of(nodes, pred) {
                for ((gi, a), b) in g.iter_mut().zip(&p).zip(&t) {
                    *gi += scale * (a - b);
                }
            }
            if let Some(g) = grad_of(nodes, target) {
                for ((gi, a), b) in g.iter_mut().zip(&p).zip(&t) {
                    *gi -= scale * (a - b);
                }
            }
        }
        Op::Dense {
            input,
            weight,
            bias,
        } => {
            let (b, f) = (nodes[input.0].value.shape()[0], nodes[input.0].value.shape()[1]);
            let g_out = out.shape()[1];
            if nodes[input.0].requires_grad {
                let w = nodes[weight.0].value.data().to_vec();
                let gx = grad_of(nodes, input).expect("tracked");
                // dX = dY · Wᵀ
                kernels::gemm(b, g_out, f, grad, false, &w, true, 1.0, gx);
            }
            if nodes[weight.0].requires_grad {
                let x = nodes[input.0].value.data().to_vec();
                let gw = grad_of(nodes, weight).expect("tracked");
                // dW = Xᵀ · dY
                kernels::gemm(f, b, g_out, &x, true, grad, false, 1.0, gw);
            }
            if let Some(gb) = grad_of(nodes, bias) {
                for row in grad.chunks(g_out) {
                    for (gi, d) in gb.iter_mut().zip(row) {
                        *gi += d;
                    }
                }
            }
        }
        Op::Conv2d {
            input,
            kernel,
            bias,
            geom,
            cols,
        } => {
            let os = out.shape();
            let (b, cout, hw) = (os[0], os[1], os[2] * os[3]);
            let rows = geom.col_rows();
            let plane_in = geom.cin * geom.h * geom.w;
            if let Some(gb) = grad_of(nodes, bias) {
                for bi in 0..b {
                    for c in 0..cout {
                        let s: f32 = grad[(bi * cout + c) * hw..(bi * cout + c + 1) * hw]
                            .iter()
                            .sum();
                        gb[c] += s;
                    }
                }
            }
            if nodes[kernel.0].requires_grad {
                let gk = grad_of(nodes, kernel).expect("tracked");
                for bi in 0..b {
                    let c = &cols[bi * geom.col_len()..(bi + 1) * geom.col_len()];
                    // dK += dY · colsᵀ
                    kernels::gemm(
                        cout,
                        hw,
                        rows,
                        &grad[bi * cout * hw..(bi + 1) * cout * hw],
                        false,
                        c,
                        true,
                        1.0,
                        gk,
                    );
                }
            }
            if nodes[input.0].requires_grad {
                let kw = nodes[kernel.0].value.data().to_vec();
                let gx = grad_of(nodes, input).expect("tracked");
                let mut dcols = vec![0.0f32; geom.col_len()];
                for bi in 0..b {
                    // dcols = Kᵀ · dY
                    kernels::gemm(
                        rows,
                        cout,
                        hw,
                        &kw,
                        true,
                        &grad[bi * cout * hw..(bi + 1) * cout * hw],
                        false,
                        0.0,
                        &mut dcols,
                    );
                    kernels::col2im(&geom, &dcols, &mut gx[bi * plane_in..(bi + 1) * plane_in]);
                }
            }
        }
    }
}
