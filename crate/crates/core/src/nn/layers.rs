use alloc::vec::Vec;

/// 3×3 convolution, stride 1, zero "same" padding. Weights are
/// `[out][in][ky][kx]`, activations `[channel][row][col]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Conv2d {
    pub cin: usize,
    pub cout: usize,
    pub rows: usize,
    pub cols: usize,
    pub weight: Vec<f64>,
    pub bias: Vec<f64>,
}

const K: usize = 3;

impl Conv2d {
    pub fn new(cin: usize, cout: usize, rows: usize, cols: usize) -> Self {
        Conv2d { cin, cout, rows, cols, weight: alloc::vec![0.0; cout * cin * K * K], bias: alloc::vec![0.0; cout] }
    }

    pub fn fan_in(&self) -> usize {
        self.cin * K * K
    }

    pub fn out_len(&self) -> usize {
        self.cout * self.rows * self.cols
    }

    pub fn forward(&self, x: &[f64], y: &mut Vec<f64>) {
        let (rows, cols) = (self.rows, self.cols);
        let plane = rows * cols;
        y.clear();
        y.resize(self.out_len(), 0.0);
        for o in 0..self.cout {
            let out = &mut y[o * plane..(o + 1) * plane];
            out.iter_mut().for_each(|v| *v = self.bias[o]);
            for i in 0..self.cin {
                let inp = &x[i * plane..(i + 1) * plane];
                let w = &self.weight[(o * self.cin + i) * K * K..][..K * K];
                for ky in 0..K {
                    for kx in 0..K {
                        let wk = w[ky * K + kx];
                        if wk == 0.0 {
                            continue;
                        }
                        // Output rows/cols for which the tap stays inside the input.
                        let (r0, r1) = span(ky, rows);
                        let (c0, c1) = span(kx, cols);
                        for r in r0..r1 {
                            let src = (r + ky - 1) * cols;
                            let dst = r * cols;
                            for c in c0..c1 {
                                out[dst + c] += wk * inp[src + c + kx - 1];
                            }
                        }
                    }
                }
            }
        }
    }

    /// Accumulate parameter gradients into `dw`/`db`; write the input
    /// gradient to `dx` when asked.
    pub fn backward(&self, x: &[f64], dy: &[f64], dw: &mut [f64], db: &mut [f64], dx: Option<&mut Vec<f64>>) {
        let (rows, cols) = (self.rows, self.cols);
        let plane = rows * cols;
        let mut dx = dx;
        if let Some(d) = dx.as_deref_mut() {
            d.clear();
            d.resize(self.cin * plane, 0.0);
        }
        for o in 0..self.cout {
            let g = &dy[o * plane..(o + 1) * plane];
            db[o] += g.iter().sum::<f64>();
            for i in 0..self.cin {
                let inp = &x[i * plane..(i + 1) * plane];
                let base = (o * self.cin + i) * K * K;
                for ky in 0..K {
                    for kx in 0..K {
                        let (r0, r1) = span(ky, rows);
                        let (c0, c1) = span(kx, cols);
                        let mut acc = 0.0;
                        for r in r0..r1 {
                            let src = (r + ky - 1) * cols;
                            for c in c0..c1 {
                                acc += g[r * cols + c] * inp[src + c + kx - 1];
                            }
                        }
                        dw[base + ky * K + kx] += acc;
                        if let Some(d) = dx.as_deref_mut() {
                            let wk = self.weight[base + ky * K + kx];
                            let d = &mut d[i * plane..(i + 1) * plane];
                            for r in r0..r1 {
                                let src = (r + ky - 1) * cols;
                                for c in c0..c1 {
                                    d[src + c + kx - 1] += wk * g[r * cols + c];
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Range of output coordinates whose tap `k` (0..3) lands inside `0..n`.
#[inline]
fn span(k: usize, n: usize) -> (usize, usize) {
    match k {
        0 => (1, n),
        1 => (0, n),
        _ => (0, n.saturating_sub(1)),
    }
}

/// Fully connected layer, weights `[out][in]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub nin: usize,
    pub nout: usize,
    pub weight: Vec<f64>,
    pub bias: Vec<f64>,
}

impl Dense {
    pub fn new(nin: usize, nout: usize) -> Self {
        Dense { nin, nout, weight: alloc::vec![0.0; nin * nout], bias: alloc::vec![0.0; nout] }
    }

    pub fn forward(&self, x: &[f64], y: &mut Vec<f64>) {
        y.clear();
        y.extend(
            self.weight
                .chunks_exact(self.nin)
                .zip(&self.bias)
                .map(|(row, b)| b + row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>()),
        );
    }

    pub fn backward(&self, x: &[f64], dy: &[f64], dw: &mut [f64], db: &mut [f64], dx: Option<&mut Vec<f64>>) {
        for (o, &g) in dy.iter().enumerate() {
            db[o] += g;
            if g != 0.0 {
                for (w, v) in dw[o * self.nin..(o + 1) * self.nin].iter_mut().zip(x) {
                    *w += g * v;
                }
            }
        }
        if let Some(d) = dx {
            d.clear();
            d.resize(self.nin, 0.0);
            for (row, &g) in self.weight.chunks_exact(self.nin).zip(dy) {
                if g != 0.0 {
                    for (di, w) in d.iter_mut().zip(row) {
                        *di += g * w;
                    }
                }
            }
        }
    }
}
