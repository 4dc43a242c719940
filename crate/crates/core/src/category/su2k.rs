//! SU(2)_k from the q-deformed Racah–Wigner 6j-symbols.
//!
//! Labels are doubled spins `0..=k`. Quantum integers are
//! `[n] = sin(nπ/(k+2)) / sin(π/(k+2))`, and the F-symbols are
//!
//! ```text
//! (F^{abc}_d)_{ef} = (-1)^{a+b+c+d} sqrt([2e+1][2f+1]) {a b e; c d f}_q
//! ```
//!
//! in spin units. This gauge is real and orthogonal.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{AnyonModel, Label, ModelKind, ModelParts};

/// Spin-label name for a doubled spin.
pub(crate) fn spin_name(doubled: u32) -> String {
    if doubled % 2 == 0 {
        (doubled / 2).to_string()
    } else {
        format!("{doubled}/2")
    }
}

/// `N_ab^c` for doubled spins at level `k`.
pub(crate) fn su2k_fusion(k: u32, a: u32, b: u32, c: u32) -> bool {
    a.abs_diff(b) <= c && c <= (a + b).min(2 * k - a - b) && (a + b + c) % 2 == 0
}

struct QuantumInts {
    theta: f64,
}

impl QuantumInts {
    fn new(k: u32) -> Self {
        QuantumInts { theta: PI / (k as f64 + 2.0) }
    }

    fn int(&self, n: i64) -> f64 {
        (n as f64 * self.theta).sin() / self.theta.sin()
    }

    fn factorial(&self, n: i64) -> f64 {
        (1..=n).map(|m| self.int(m)).product()
    }

    /// Triangle coefficient for doubled spins.
    fn delta(&self, a: i64, b: i64, c: i64) -> f64 {
        let num = self.factorial((a + b - c) / 2) * self.factorial((a - b + c) / 2) * self.factorial((-a + b + c) / 2);
        (num / self.factorial((a + b + c) / 2 + 1)).sqrt()
    }

    /// `{a b e; c d f}_q` with triads (a,b,e), (e,c,d), (b,c,f), (a,f,d).
    fn six_j(&self, a: i64, b: i64, e: i64, c: i64, d: i64, f: i64) -> f64 {
        let triads = [(a + b + e) / 2, (e + c + d) / 2, (b + c + f) / 2, (a + f + d) / 2];
        let quads = [(a + b + c + d) / 2, (a + e + c + f) / 2, (b + e + d + f) / 2];
        let lo = *triads.iter().max().unwrap();
        let hi = *quads.iter().min().unwrap();
        let mut sum = 0.0;
        for z in lo..=hi {
            let mut den = 1.0;
            for t in triads {
                den *= self.factorial(z - t);
            }
            for q in quads {
                den *= self.factorial(q - z);
            }
            let sign = if z % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * self.factorial(z + 1) / den;
        }
        self.delta(a, b, e) * self.delta(e, c, d) * self.delta(b, c, f) * self.delta(a, f, d) * sum
    }
}

pub(crate) fn build(k: u32) -> AnyonModel {
    let q = QuantumInts::new(k);
    let rank = k + 1;
    let names: Vec<String> = (0..rank).map(spin_name).collect();
    let labels = || (0..rank).map(|x| x as u8);
    let adm = |a: u8, b: u8, c: u8| su2k_fusion(k, a as u32, b as u32, c as u32);

    let mut fusion = Vec::new();
    for a in labels() {
        for b in labels() {
            for c in labels() {
                if adm(a, b, c) {
                    fusion.push([Label(a), Label(b), Label(c)]);
                }
            }
        }
    }

    let mut f_entries = Vec::new();
    for a in labels() {
        for b in labels() {
            for c in labels() {
                for d in labels() {
                    for e in labels().filter(|&e| adm(a, b, e) && adm(e, c, d)) {
                        for f in labels().filter(|&f| adm(b, c, f) && adm(a, f, d)) {
                            let (ai, bi, ci, di, ei, fi) = (a as i64, b as i64, c as i64, d as i64, e as i64, f as i64);
                            let sign = if ((ai + bi + ci + di) / 2) % 2 == 0 { 1.0 } else { -1.0 };
                            let v = sign * (q.int(ei + 1) * q.int(fi + 1)).sqrt() * q.six_j(ai, bi, ei, ci, di, fi);
                            f_entries.push(([a, b, c, d, e, f].map(Label), Complex64::new(v, 0.0)));
                        }
                    }
                }
            }
        }
    }

    // R^{ab}_c = (-1)^{c-a-b} exp(iπ [c(c+1) - a(a+1) - b(b+1)] / (k+2)), spins a,b,c.
    let mut r_entries = Vec::new();
    for (a, b, c) in fusion.iter().map(|t| (t[0].0 as i64, t[1].0 as i64, t[2].0 as i64)) {
        let casimir = |x: i64| x * (x + 2); // 4 j(j+1)
        let phase = PI * (casimir(c) - casimir(a) - casimir(b)) as f64 / (4.0 * (k as f64 + 2.0));
        let sign = if ((c - a - b) / 2).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        r_entries.push(([Label(a as u8), Label(b as u8), Label(c as u8)], Complex64::from_polar(sign, phase)));
    }

    let norm = (2.0 / (k as f64 + 2.0)).sqrt();
    let s = DMatrix::from_fn(rank as usize, rank as usize, |a, b| {
        Complex64::new(norm * (((a + 1) * (b + 1)) as f64 * q.theta).sin(), 0.0)
    });
    let qdim = (0..rank).map(|a| q.int(a as i64 + 1)).collect();

    AnyonModel::from_parts(ModelParts {
        kind: ModelKind::Su2k { k },
        names,
        dual: (0..rank).map(|a| Label(a as u8)).collect(),
        fusion,
        qdim,
        f_entries,
        r_entries,
        s_matrix: Some(s),
    })
    .expect("SU(2)_k data is structurally consistent")
}
