//! Gradient followers used to move a search-distribution center.
//!
//! Both optimizers are direction-agnostic: `step` takes a gradient and
//! returns the delta magnitude; the caller adds or subtracts it depending on
//! whether it is ascending or descending its objective.

/// Adam with bias correction.
///
/// `step` expects t to start at zero (first call uses t = 1):
/// `m <- b1 m + (1-b1) g`, `v <- b2 v + (1-b2) g^2`,
/// `delta = lr * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps)`.
#[derive(Clone, Debug)]
pub struct AdamState {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    t: u64,
    m: Vec<f64>,
    v: Vec<f64>,
}

impl AdamState {
    /// Fresh state with the usual defaults beta1 = 0.9, beta2 = 0.999,
    /// eps = 1e-8 and zeroed moments.
    pub fn new(dim: usize, lr: f64) -> Self {
        Self {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            t: 0,
            m: vec![0.0; dim],
            v: vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn step(&mut self, grad: &[f64]) -> Vec<f64> {
        assert_eq!(grad.len(), self.m.len(), "gradient length mismatch");
        self.t += 1;
        let bc1 = 1.0 - self.beta1.powi(self.t as i32);
        let bc2 = 1.0 - self.beta2.powi(self.t as i32);
        let mut delta = Vec::with_capacity(grad.len());
        for (i, &g) in grad.iter().enumerate() {
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * g;
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * g * g;
            let m_hat = self.m[i] / bc1;
            let v_hat = self.v[i] / bc2;
            delta.push(self.lr * m_hat / (v_hat.sqrt() + self.eps));
        }
        delta
    }
}

/// ClipUp: normalized-gradient ascent with momentum and a hard speed limit.
///
/// `v <- clip(momentum * v + step_size * g / |g|, max_speed)` where `clip`
/// rescales to euclidean norm `max_speed` when exceeded; the delta is the
/// velocity itself, so consecutive deltas can never move the center faster
/// than `max_speed` per step. Normalizing g makes the update invariant to
/// gradient scale.
#[derive(Clone, Debug)]
pub struct ClipUpState {
    pub step_size: f64,
    pub max_speed: f64,
    pub momentum: f64,
    velocity: Vec<f64>,
}

impl ClipUpState {
    /// Fresh state with the conventional momentum of 0.9.
    pub fn new(dim: usize, step_size: f64, max_speed: f64) -> Self {
        Self {
            step_size,
            max_speed,
            momentum: 0.9,
            velocity: vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.velocity.len()
    }

    pub fn velocity(&self) -> &[f64] {
        &self.velocity
    }

    pub fn step(&mut self, grad: &[f64]) -> Vec<f64> {
        assert_eq!(grad.len(), self.velocity.len(), "gradient length mismatch");
        let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if norm > 0.0 {
            for (v, &g) in self.velocity.iter_mut().zip(grad) {
                *v = self.momentum * *v + self.step_size * g / norm;
            }
        } else {
            // zero gradient: velocity just decays
            for v in self.velocity.iter_mut() {
                *v *= self.momentum;
            }
        }
        let speed = self.velocity.iter().map(|v| v * v).sum::<f64>().sqrt();
        if speed > self.max_speed {
            let scale = self.max_speed / speed;
            for v in self.velocity.iter_mut() {
                *v *= scale;
            }
        }
        self.velocity.clone()
    }
}

/// Either gradient follower, for callers that take the choice as config.
#[derive(Clone, Debug)]
pub enum Optimizer {
    Adam(AdamState),
    ClipUp(ClipUpState),
}

impl Optimizer {
    pub fn step(&mut self, grad: &[f64]) -> Vec<f64> {
        match self {
            Optimizer::Adam(s) => s.step(grad),
            Optimizer::ClipUp(s) => s.step(grad),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Optimizer::Adam(s) => s.dim(),
            Optimizer::ClipUp(s) => s.dim(),
        }
    }
}
