use super::config::TrainConfig;

/// Adam moments for one flat parameter buffer.
#[derive(Clone, Debug)]
pub(crate) struct AdamState {
    m: Vec<f32>,
    v: Vec<f32>,
}

impl AdamState {
    pub(crate) fn new(len: usize) -> Self {
        Self {
            m: vec![0.0; len],
            v: vec![0.0; len],
        }
    }

    /// One update at 1-based step `t`.
    pub(crate) fn step(&mut self, cfg: &TrainConfig, t: usize, param: &mut [f32], grad: &[f32]) {
        let (b1, b2) = (cfg.beta1, cfg.beta2);
        let c1 = 1.0 - b1.powi(t as i32);
        let c2 = 1.0 - b2.powi(t as i32);
        let step = cfg.lr / c1;
        for (((p, &g), m), v) in param
            .iter_mut()
            .zip(grad)
            .zip(self.m.iter_mut())
            .zip(self.v.iter_mut())
        {
            *m = b1 * *m + (1.0 - b1) * g;
            *v = b2 * *v + (1.0 - b2) * g * g;
            *p -= step * *m / ((*v / c2).sqrt() + cfg.eps);
        }
    }
}
