//! Slice-level kernels shared by the tape operators.

/// `c = a · b + beta · c` with `a` (m×k), `b` (k×n), `c` (m×n), all
/// row-major; `a_t`/`b_t` read the operand as the transpose of its storage.
#[allow(clippy::too_many_arguments)]
pub(crate) fn gemm(
    m: usize,
    k: usize,
    n: usize,
    a: &[f32],
    a_t: bool,
    b: &[f32],
    b_t: bool,
    beta: f32,
    c: &mut [f32],
) {
    assert!(a.len() >= m * k && b.len() >= k * n && c.len() >= m * n);
    if m == 0 || n == 0 {
        return;
    }
    let (rsa, csa) = if a_t { (1, m as isize) } else { (k as isize, 1) };
    let (rsb, csb) = if b_t { (1, k as isize) } else { (n as isize, 1) };
    // SAFETY: the asserts above bound every index sgemm touches given these
    // strides: a spans m*k, b spans k*n and c spans m*n elements.
    unsafe {
        matrixmultiply::sgemm(
            m,
            k,
            n,
            1.0,
            a.as_ptr(),
            rsa,
            csa,
            b.as_ptr(),
            rsb,
            csb,
            beta,
            c.as_mut_ptr(),
            n as isize,
            1,
        );
    }
}

/// Geometry of one stride-1 square-kernel convolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct ConvGeom {
    pub cin: usize,
    pub h: usize,
    pub w: usize,
    pub k: usize,
    pub pad: usize,
}

impl ConvGeom {
    pub fn out_h(&self) -> usize {
        self.h + 2 * self.pad + 1 - self.k
    }

    pub fn out_w(&self) -> usize {
        self.w + 2 * self.pad + 1 - self.k
    }

    pub fn col_rows(&self) -> usize {
        self.cin * self.k * self.k
    }

    pub fn col_len(&self) -> usize {
        self.col_rows() * self.out_h() * self.out_w()
    }

    /// Output columns `[ox_lo, ox_hi)` whose input column `ox + kx - pad`
    /// falls inside the image.
    fn valid_x(&self, kx: usize) -> (usize, usize) {
        let wo = self.out_w();
        let lo = self.pad.saturating_sub(kx).min(wo);
        let hi = (self.w + self.pad).saturating_sub(kx).min(wo);
        (lo, hi.max(lo))
    }
}

/// Unfolds one image (`cin × h × w`) into `cols` (`cin·k·k × ho·wo`).
pub(crate) fn im2col(g: &ConvGeom, input: &[f32], cols: &mut [f32]) {
    let (ho, wo) = (g.out_h(), g.out_w());
    cols.fill(0.0);
    for ci in 0..g.cin {
        let plane = &input[ci * g.h * g.w..(ci + 1) * g.h * g.w];
        for ky in 0..g.k {
            for kx in 0..g.k {
                let row = (ci * g.k + ky) * g.k + kx;
                let dst = &mut cols[row * ho * wo..(row + 1) * ho * wo];
                let (xlo, xhi) = g.valid_x(kx);
                if xlo >= xhi {
                    continue;
                }
                for oy in 0..ho {
                    let iy = oy + ky;
                    if iy < g.pad || iy - g.pad >= g.h {
                        continue;
                    }
                    let src_row = &plane[(iy - g.pad) * g.w..(iy - g.pad + 1) * g.w];
                    let ix0 = xlo + kx - g.pad;
                    dst[oy * wo + xlo..oy * wo + xhi]
                        .copy_from_slice(&src_row[ix0..ix0 + (xhi - xlo)]);
                }
            }
        }
    }
}

/// Adds the folded `cols` back into `grad_input` (inverse of [`im2col`]).
pub(crate) fn col2im(g: &ConvGeom, cols: &[f32], grad_input: &mut [f32]) {
    let (ho, wo) = (g.out_h(), g.out_w());
    for ci in 0..g.cin {
        let plane = &mut grad_input[ci * g.h * g.w..(ci + 1) * g.h * g.w];
        for ky in 0..g.k {
            for kx in 0..g.k {
                let row = (ci * g.k + ky) * g.k + kx;
                let src = &cols[row * ho * wo..(row + 1) * ho * wo];
                let (xlo, xhi) = g.valid_x(kx);
                if xlo >= xhi {
                    continue;
                }
                for oy in 0..ho {
                    let iy = oy + ky;
                    if iy < g.pad || iy - g.pad >= g.h {
                        continue;
                    }
                    let ix0 = xlo + kx - g.pad;
                    let dst = &mut plane[(iy - g.pad) * g.w + ix0..(iy - g.pad) * g.w + ix0 + (xhi - xlo)];
                    for (d, s) in dst.iter_mut().zip(&src[oy * wo + xlo..oy * wo + xhi]) {
                        *d += s;
                    }
                }
            }
        }
    }
}

/// 2×2 stride-2 max pooling of one `h × w` plane. Writes maxima to `out`
/// and the flat input index of each (first, row-major) argmax to `argmax`,
/// offset by `base`.
pub(crate) fn maxpool2_plane(
    plane: &[f32],
    h: usize,
    w: usize,
    out: &mut [f32],
    argmax: &mut [u32],
    base: usize,
) {
    let (oh, ow) = (h / 2, w / 2);
    for oy in 0..oh {
        for ox in 0..ow {
            let mut best = (2 * oy) * w + 2 * ox;
            for idx in [
                (2 * oy) * w + 2 * ox + 1,
                (2 * oy + 1) * w + 2 * ox,
                (2 * oy + 1) * w + 2 * ox + 1,
            ] {
                if plane[idx] > plane[best] {
                    best = idx;
                }
            }
            out[oy * ow + ox] = plane[best];
            argmax[oy * ow + ox] = (base + best) as u32;
        }
    }
}

/// Half-open ranges of the `bins` adaptive bins over a length-`len` axis:
/// bin `i` spans `[⌊i·len/bins⌋, max(start + 1, ⌈(i+1)·len/bins⌉))`.
pub fn adaptive_bins(len: usize, bins: usize) -> Vec<(usize, usize)> {
    (0..bins)
        .map(|i| {
            let start = i * len / bins;
            let end = ((i + 1) * len).div_ceil(bins);
            (start, end.max(start + 1))
        })
        .collect()
}

/// Adaptive max pooling of one plane into `bins × bins`.
pub(crate) fn adaptive_plane(
    plane: &[f32],
    h: usize,
    w: usize,
    bins: usize,
    out: &mut [f32],
    argmax: &mut [u32],
    base: usize,
) {
    let rows = adaptive_bins(h, bins);
    let cols = adaptive_bins(w, bins);
    for (i, &(r0, r1)) in rows.iter().enumerate() {
        for (j, &(c0, c1)) in cols.iter().enumerate() {
            let mut best = r0 * w + c0;
            for y in r0..r1 {
                for x in c0..c1 {
                    let idx = y * w + x;
                    if plane[idx] > plane[best] {
                        best = idx;
                    }
                }
            }
            out[i * bins + j] = plane[best];
            argmax[i * bins + j] = (base + best) as u32;
        }
    }
}

/// Length of the pyramid representation: `channels · Σ levels²`.
pub fn pyramid_width(levels: &[usize], channels: usize) -> usize {
    channels * levels.iter().map(|l| l * l).sum::<usize>()
}
