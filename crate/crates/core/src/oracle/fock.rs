//! Truncated two-mode Fock space: density matrices, the pair-creation
//! Hamiltonian and the zero-temperature Lindblad generator.
//!
//! Basis state `|n₁, n₂⟩` has flat index `n₁·(n_max + 1) + n₂`. Everything runs
//! in the frame rotating at the mode frequencies, where the Hamiltonian reduces
//! to `λ·b̂₁†b̂₂† + λ*·b̂₁b̂₂` with `λ = γE_P/ħ`.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::expm::expm;
use crate::error::{invalid, CventError, Result};

/// Per-step trace change above which [`lindblad_step`] fails.
pub const TRACE_DRIFT_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct FockDensityMatrix {
    n_max: usize,
    pub elements: Array2<C64>,
}

impl FockDensityMatrix {
    pub fn vacuum(n_max: usize) -> Result<Self> {
        check_cutoff(n_max)?;
        let d = (n_max + 1).pow(2);
        let mut elements = Array2::zeros((d, d));
        elements[[0, 0]] = C64::new(1.0, 0.0);
        Ok(Self { n_max, elements })
    }

    pub fn from_elements(n_max: usize, elements: Array2<C64>) -> Result<Self> {
        check_cutoff(n_max)?;
        let d = (n_max + 1).pow(2);
        if elements.dim() != (d, d) {
            return Err(invalid("elements", format!("expected {d}x{d}, got {:?}", elements.dim())));
        }
        Ok(Self { n_max, elements: elements.as_standard_layout().into_owned() })
    }

    /// Product of truncated geometric distributions with means `n1`, `n2`
    /// (before truncation). The trace is `1 − deficit`, not renormalized.
    pub fn thermal(n1: f64, n2: f64, n_max: usize) -> Result<Self> {
        check_cutoff(n_max)?;
        if !(n1 >= 0.0 && n2 >= 0.0) {
            return Err(CventError::Domain(format!("occupations must be >= 0, got ({n1}, {n2})")));
        }
        let p = |n: f64, k: usize| {
            let x = n / (1.0 + n);
            (1.0 - x) * x.powi(k as i32)
        };
        let mut rho = Self::vacuum(n_max)?;
        rho.elements[[0, 0]] = C64::new(0.0, 0.0);
        for a in 0..=n_max {
            for b in 0..=n_max {
                let i = rho.index(a, b);
                rho.elements[[i, i]] = C64::new(p(n1, a) * p(n2, b), 0.0);
            }
        }
        Ok(rho)
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        (self.n_max + 1).pow(2)
    }

    pub fn index(&self, n1: usize, n2: usize) -> usize {
        n1 * (self.n_max + 1) + n2
    }

    pub fn trace(&self) -> C64 {
        self.elements.diag().sum()
    }

    /// `tr ρ²`, valid for Hermitian `ρ`.
    pub fn purity(&self) -> f64 {
        self.elements.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `max |ρ − ρ†|` elementwise.
    pub fn hermiticity_defect(&self) -> f64 {
        let r = &self.elements;
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((r[[i, j]] - r[[j, i]].conj()).norm());
            }
        }
        worst
    }

    pub fn min_diagonal(&self) -> f64 {
        self.elements.diag().iter().map(|z| z.re).fold(f64::INFINITY, f64::min)
    }

    /// Population with either mode in one of the two highest Fock shells.
    pub fn top_shell_population(&self) -> f64 {
        let top = self.n_max.saturating_sub(1);
        let mut p = 0.0;
        for a in 0..=self.n_max {
            for b in 0..=self.n_max {
                if a >= top || b >= top {
                    let i = self.index(a, b);
                    p += self.elements[[i, i]].re;
                }
            }
        }
        p
    }

    fn hermitize(&mut self) {
        let d = self.dim();
        for i in 0..d {
            for j in i..d {
                let avg = 0.5 * (self.elements[[i, j]] + self.elements[[j, i]].conj());
                self.elements[[i, j]] = avg;
                self.elements[[j, i]] = avg.conj();
            }
        }
    }
}

fn check_cutoff(n_max: usize) -> Result<()> {
    if n_max < 1 {
        return Err(invalid("n_max", "cutoff must be at least 1"));
    }
    Ok(())
}

/// Pair-creation Hamiltonian `λ·b̂₁†b̂₂† + λ*·b̂₁b̂₂` in units of ħ.
pub fn build_hamiltonian(coupling: C64, n_max: usize) -> Result<Array2<C64>> {
    check_cutoff(n_max)?;
    let m = n_max + 1;
    let mut h = Array2::zeros((m * m, m * m));
    for a in 0..n_max {
        for b in 0..n_max {
            let lo = a * m + b;
            let hi = (a + 1) * m + b + 1;
            let amp = (((a + 1) * (b + 1)) as f64).sqrt();
            h[[hi, lo]] = coupling * amp;
            h[[lo, hi]] = coupling.conj() * amp;
        }
    }
    Ok(h)
}

/// Pair-creation coupling at the start, midpoint and end of one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepCoupling {
    pub start: C64,
    pub mid: C64,
    pub end: C64,
}

impl From<C64> for StepCoupling {
    fn from(c: C64) -> Self {
        Self { start: c, mid: c, end: c }
    }
}

/// `dρ/dt = −i[H, ρ] + Σ_j (Γ_j/2)(2b̂_jρb̂_j† − b̂_j†b̂_jρ − ρb̂_j†b̂_j)`.
fn lindblad_rhs(rho: &[C64], m: usize, lambda: C64, g1: f64, g2: f64, out: &mut [C64]) {
    let d = m * m;
    let sq: Vec<f64> = (0..=m).map(|k| (k as f64).sqrt()).collect();
    let mi = C64::new(0.0, -1.0);
    for r in 0..d {
        let (r1, r2) = (r / m, r % m);
        let row = &rho[r * d..(r + 1) * d];
        for c in 0..d {
            let (c1, c2) = (c / m, c % m);
            let mut acc = C64::new(0.0, 0.0);

            // (Hρ)[r, c]
            let mut h_rho = C64::new(0.0, 0.0);
            if r1 > 0 && r2 > 0 {
                h_rho += lambda * sq[r1] * sq[r2] * rho[(r - m - 1) * d + c];
            }
            if r1 + 1 < m && r2 + 1 < m {
                h_rho += lambda.conj() * sq[r1 + 1] * sq[r2 + 1] * rho[(r + m + 1) * d + c];
            }
            // (ρH)[r, c]
            let mut rho_h = C64::new(0.0, 0.0);
            if c1 + 1 < m && c2 + 1 < m {
                rho_h += row[c + m + 1] * lambda * sq[c1 + 1] * sq[c2 + 1];
            }
            if c1 > 0 && c2 > 0 {
                rho_h += row[c - m - 1] * lambda.conj() * sq[c1] * sq[c2];
            }
            acc += mi * (h_rho - rho_h);

            // jumps b̂ρb̂† and the anticommutator with n̂
            if r1 + 1 < m && c1 + 1 < m {
                acc += g1 * sq[r1 + 1] * sq[c1 + 1] * rho[(r + m) * d + c + m];
            }
            if r2 + 1 < m && c2 + 1 < m {
                acc += g2 * sq[r2 + 1] * sq[c2 + 1] * rho[(r + 1) * d + c + 1];
            }
            let loss = 0.5 * (g1 * (r1 + c1) as f64 + g2 * (r2 + c2) as f64);
            acc -= row[c] * loss;

            out[r * d + c] = acc;
        }
    }
}

/// One RK4 step of the Lindblad equation, followed by re-symmetrization.
///
/// The trace is not renormalized. A trace change above [`TRACE_DRIFT_LIMIT`]
/// is reported as an error.
pub fn lindblad_step(
    rho: &FockDensityMatrix,
    coupling: impl Into<StepCoupling>,
    gamma1: f64,
    gamma2: f64,
    dt: f64,
) -> Result<FockDensityMatrix> {
    let c = coupling.into();
    if !(gamma1 >= 0.0 && gamma2 >= 0.0) {
        return Err(invalid("gamma", "decay rates must be >= 0"));
    }
    let rate = gamma1.max(gamma2).max(c.start.norm()).max(c.mid.norm()).max(c.end.norm());
    if !(dt > 0.0) || dt * rate >= 0.1 {
        return Err(invalid("dt", format!("need 0 < dt·max(rate) < 0.1, got dt = {dt}, rate = {rate}")));
    }
    let m = rho.n_max + 1;
    let d = m * m;
    let y = rho.elements.as_slice().expect("standard layout");
    let mut k = [vec![C64::new(0.0, 0.0); d * d], vec![C64::new(0.0, 0.0); d * d]];
    let mut acc: Vec<C64> = y.to_vec();
    let mut tmp = vec![C64::new(0.0, 0.0); d * d];

    let stages = [(0.0, c.start, 1.0), (0.5, c.mid, 2.0), (0.5, c.mid, 2.0), (1.0, c.end, 1.0)];
    for (s, &(frac, lambda, weight)) in stages.iter().enumerate() {
        let input: &[C64] = if s == 0 {
            y
        } else {
            for i in 0..d * d {
                tmp[i] = y[i] + k[0][i] * (frac * dt);
            }
            &tmp
        };
        lindblad_rhs(input, m, lambda, gamma1, gamma2, &mut k[1]);
        for i in 0..d * d {
            acc[i] += k[1][i] * (weight * dt / 6.0);
        }
        k.swap(0, 1);
    }

    let mut next = FockDensityMatrix {
        n_max: rho.n_max,
        elements: Array2::from_shape_vec((d, d), acc).expect("square"),
    };
    next.hermitize();
    let drift = (next.trace() - rho.trace()).norm();
    if drift > TRACE_DRIFT_LIMIT {
        return Err(CventError::TraceDrift { drift, limit: TRACE_DRIFT_LIMIT });
    }
    Ok(next)
}

/// Thermal population beyond the cutoff exceeded this when building a state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationWarning {
    pub deficit: f64,
}

pub const THERMAL_DEFICIT_LIMIT: f64 = 1e-8;

/// `Ŝ(ξ)·ρ̂_th·Ŝ†(ξ)` with `Ŝ(ξ) = exp(ξ*·b̂₁b̂₂ − ξ·b̂₁†b̂₂†)`, `ξ = u·e^{iφ}`.
///
/// The generator conserves `n₁ − n₂`, so `Ŝ` is exponentiated and applied one
/// invariant block at a time.
pub fn build_squeezed_thermal(
    u: f64,
    phi: f64,
    n1: f64,
    n2: f64,
    n_max: usize,
) -> Result<(FockDensityMatrix, Option<TruncationWarning>)> {
    if !(u >= 0.0 && u.is_finite() && phi.is_finite()) {
        return Err(CventError::Domain(format!("need finite u >= 0, got u = {u}, phi = {phi}")));
    }
    let thermal = FockDensityMatrix::thermal(n1, n2, n_max)?;
    let deficit = 1.0 - thermal.trace().re;
    let warning = (deficit > THERMAL_DEFICIT_LIMIT).then_some(TruncationWarning { deficit });
    if u == 0.0 {
        return Ok((thermal, warning));
    }

    let xi = C64::from_polar(u, phi);
    let m = n_max + 1;
    let mut rho = Array2::<C64>::zeros((m * m, m * m));
    let p = thermal.elements.diag().mapv(|z| z.re);
    for diff in -(n_max as i64)..=(n_max as i64) {
        // states (a, a − diff) inside the box, ordered by a
        let block: Vec<usize> = (0..m)
            .filter_map(|a| {
                let b = a as i64 - diff;
                (0..m as i64).contains(&b).then(|| a * m + b as usize)
            })
            .collect();
        let k = block.len();
        let mut gen = Array2::<C64>::zeros((k, k));
        for i in 0..k.saturating_sub(1) {
            let (a, b) = (block[i] / m, block[i] % m);
            let amp = (((a + 1) * (b + 1)) as f64).sqrt();
            gen[[i + 1, i]] = -xi * amp;
            gen[[i, i + 1]] = xi.conj() * amp;
        }
        // ρ_th is diagonal and S maps each block into itself
        let s = expm(&gen);
        for (i, &bi) in block.iter().enumerate() {
            for (j, &bj) in block.iter().enumerate() {
                rho[[bi, bj]] = (0..k).map(|l| s[[i, l]] * p[block[l]] * s[[j, l]].conj()).sum();
            }
        }
    }
    Ok((FockDensityMatrix::from_elements(n_max, rho)?, warning))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleMoments {
    pub mean_n1: f64,
    pub mean_n2: f64,
    pub pair_corr: C64,
    /// `1 + ⟨n̂₁⟩ + ⟨n̂₂⟩ − 2|⟨b̂₁b̂₂⟩|`, the correlation variance at the best
    /// homodyne angles.
    pub delta_sq: f64,
}

pub fn extract_moments(rho: &FockDensityMatrix) -> OracleMoments {
    let m = rho.n_max + 1;
    let r = &rho.elements;
    let (mut n1, mut n2) = (0.0, 0.0);
    let mut pair = C64::new(0.0, 0.0);
    for a in 0..m {
        for b in 0..m {
            let i = a * m + b;
            let p = r[[i, i]].re;
            n1 += a as f64 * p;
            n2 += b as f64 * p;
            if a > 0 && b > 0 {
                // tr(ρ b̂₁b̂₂) = Σ ⟨a, b|ρ|a−1, b−1⟩·√(ab)
                pair += r[[i, i - m - 1]] * ((a * b) as f64).sqrt();
            }
        }
    }
    OracleMoments {
        mean_n1: n1,
        mean_n2: n2,
        pair_corr: pair,
        delta_sq: 1.0 + n1 + n2 - 2.0 * pair.norm(),
    }
}

/// Variance of the single-mode quadrature `(b̂e^{−iα} + b̂†e^{iα})/2`.
pub fn quadrature_variance(rho: &FockDensityMatrix, mode: crate::state::Mode, alpha: f64) -> f64 {
    use crate::state::Mode;
    let m = rho.n_max + 1;
    let r = &rho.elements;
    let (mut b1, mut b2, mut n) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0), 0.0);
    for a in 0..m {
        for c in 0..m {
            let i = a * m + c;
            let k = match mode {
                Mode::One => a,
                Mode::Two => c,
            };
            let stride = match mode {
                Mode::One => m,
                Mode::Two => 1,
            };
            n += k as f64 * r[[i, i]].re;
            if k >= 1 {
                b1 += r[[i, i - stride]] * (k as f64).sqrt();
            }
            if k >= 2 {
                b2 += r[[i, i - 2 * stride]] * ((k * (k - 1)) as f64).sqrt();
            }
        }
    }
    let rot = C64::from_polar(1.0, -alpha);
    let mean = (b1 * rot).re;
    // ⟨χ²⟩ = (⟨b²⟩e^{−2iα} + c.c. + 2⟨n⟩ + 1)/4
    ((b2 * rot * rot).re * 2.0 + 2.0 * n + 1.0) / 4.0 - mean * mean
}
