use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::circuit::{Gate, UnaryOp};

/// Dense state of `n` qubits; qubit `q` is bit `q` of the basis index.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

type Mat2 = [[Complex64; 2]; 2];

impl StateVector {
    pub fn zero(n: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        StateVector { n, amps }
    }

    /// Haar-random state on the first `active` qubits, `|0⟩` on the rest.
    pub fn random<R: Rng + ?Sized>(n: usize, active: usize, rng: &mut R) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        for a in amps.iter_mut().take(1 << active) {
            *a = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        }
        let mut s = StateVector { n, amps };
        s.normalize();
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    fn normalize(&mut self) {
        let norm = self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut self.amps {
            *a /= norm;
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn apply(&mut self, gate: &Gate) {
        match *gate {
            Gate::Unary { op, q } => self.apply_1q(q, &matrix(op)),
            Gate::Cx { control, target } => {
                let (c, t) = (1usize << control, 1usize << target);
                for i in 0..self.amps.len() {
                    if i & c != 0 && i & t == 0 {
                        self.amps.swap(i, i | t);
                    }
                }
            }
            Gate::Swap { a, b } => {
                let (x, y) = (1usize << a, 1usize << b);
                for i in 0..self.amps.len() {
                    if i & x != 0 && i & y == 0 {
                        self.amps.swap(i, i ^ x ^ y);
                    }
                }
            }
        }
    }

    fn apply_1q(&mut self, q: usize, m: &Mat2) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a, b) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a + m[0][1] * b;
                self.amps[i | bit] = m[1][0] * a + m[1][1] * b;
            }
        }
    }

    /// Moves the content of line `q` to line `to[q]`; `to` is a bijection.
    pub fn relabel(&self, to: &[usize]) -> StateVector {
        let mut amps = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (i, &a) in self.amps.iter().enumerate() {
            let mut j = 0;
            for (q, &t) in to.iter().enumerate() {
                if i >> q & 1 == 1 {
                    j |= 1 << t;
                }
            }
            amps[j] = a;
        }
        StateVector { n: self.n, amps }
    }
}

fn matrix(op: UnaryOp) -> Mat2 {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    match op {
        UnaryOp::U(theta, phi, lambda) => {
            let (s, co) = (theta / 2.0).sin_cos();
            [
                [c(co, 0.0), -Complex64::from_polar(s, lambda)],
                [
                    Complex64::from_polar(s, phi),
                    Complex64::from_polar(co, phi + lambda),
                ],
            ]
        }
        UnaryOp::H => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]]
        }
        UnaryOp::X => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        UnaryOp::Rz(lambda) => [
            [Complex64::from_polar(1.0, -lambda / 2.0), c(0.0, 0.0)],
            [c(0.0, 0.0), Complex64::from_polar(1.0, lambda / 2.0)],
        ],
    }
}
