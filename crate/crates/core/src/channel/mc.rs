use num_complex::Complex;
use serde::Serialize;

use super::block::{ls_estimate, pilot_phase_rx, CMatrix, ChannelBlock, PilotMode};
use super::sinr::SinrBreakdown;
use crate::analytic::{estimate_energy, sinr_closed_form};
use crate::error::{Error, Result};
use crate::geometry::Deployment;
use crate::model::{PilotBook, SystemConfig};
use crate::parallel::run_seeded;
use crate::real::Real;
use crate::stats::Summary;

/// Batches per run; the batch layout depends only on `n_blocks`.
const BATCHES: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McOptions {
    pub n_blocks: usize,
    pub seed: u64,
    /// 1 = sequential, 0 = rayon default.
    pub workers: usize,
}

impl McOptions {
    pub fn new(n_blocks: usize, seed: u64) -> Self {
        Self {
            n_blocks,
            seed,
            workers: 1,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    fn batch_sizes(&self) -> Vec<usize> {
        let nb = BATCHES.min(self.n_blocks).max(1);
        (0..nb)
            .map(|b| self.n_blocks / nb + usize::from(b < self.n_blocks % nb))
            .collect()
    }
}

/// Raw per-block sums for one tagged UE. The gain `x = h^H hhat` is
/// accumulated around the shift `c = M beta` to keep the variance sum well
/// conditioned.
#[derive(Debug, Clone)]
struct Sums {
    n: usize,
    shift: f64,
    x: Complex<f64>,
    x2: f64,
    hhat2: f64,
    intra: Vec<f64>,
    inter: Vec<Vec<f64>>,
    pilot_corr: Vec<Vec<f64>>,
}

impl Sums {
    fn new(counts: &[usize], shift: f64) -> Self {
        let zeros = || counts.iter().map(|&n| vec![0.0; n]).collect::<Vec<_>>();
        Self {
            n: 0,
            shift,
            x: Complex::new(0.0, 0.0),
            x2: 0.0,
            hhat2: 0.0,
            intra: Vec::new(),
            inter: zeros(),
            pilot_corr: zeros(),
        }
    }

    fn merge(&mut self, o: &Sums) {
        self.n += o.n;
        self.x += o.x;
        self.x2 += o.x2;
        self.hhat2 += o.hhat2;
        if self.intra.is_empty() {
            self.intra = vec![0.0; o.intra.len()];
        }
        for (a, b) in self.intra.iter_mut().zip(&o.intra) {
            *a += b;
        }
        for (a, b) in self.inter.iter_mut().flatten().zip(o.inter.iter().flatten()) {
            *a += b;
        }
        for (a, b) in self.pilot_corr.iter_mut().flatten().zip(o.pilot_corr.iter().flatten()) {
            *a += b;
        }
    }

    fn mean_gain(&self) -> Complex<f64> {
        self.x / self.n as f64 + self.shift
    }

    /// Unbiased sample variance of `x`.
    fn gain_variance(&self) -> f64 {
        let n = self.n as f64;
        let m = self.x / n;
        (self.x2 - n * m.norm_sqr()) / (n - 1.0)
    }

    fn breakdown<T: Real>(&self, dep: &Deployment<T>, cfg: &SystemConfig<T>, k: usize) -> SinrBreakdown<f64> {
        let n = self.n as f64;
        let t = dep.tagged_cell;
        let p = |j: usize, i: usize| dep.powers[j][i].as_f64();
        let intra = self.intra.iter().enumerate().map(|(i, s)| p(t, i) * s / n).collect();
        let inter = self
            .inter
            .iter()
            .enumerate()
            .map(|(j, c)| c.iter().enumerate().map(|(i, s)| p(j, i) * s / n).collect())
            .collect();
        let p0k = p(t, k);
        SinrBreakdown::assemble(
            p0k * self.mean_gain().norm_sqr(),
            intra,
            p0k * self.gain_variance(),
            inter,
            cfg.sigma2.as_f64() * self.hhat2 / n,
        )
    }
}

/// Monte-Carlo estimate of every expectation in the SINR of one tagged UE.
#[derive(Debug, Clone, Serialize)]
pub struct McEstimate {
    pub ue: usize,
    pub mode: PilotMode,
    pub n_blocks: usize,
    pub seed: u64,
    pub breakdown: SinrBreakdown<f64>,
    /// Batch-means standard error of `breakdown.sinr`.
    pub sinr_std_err: f64,
    /// `E ||hhat||^2`.
    pub estimate_energy: f64,
    /// `E h^H hhat` (complex, stored as `[re, im]`).
    pub gain_mean: [f64; 2],
    /// Unbiased sample variance of `h^H hhat`.
    pub gain_variance: f64,
    /// `E |s_ji^T conj(v_k)|^2` per interfering UE.
    pub pilot_correlation: Vec<Vec<f64>>,
}

fn check_inputs<T: Real>(dep: &Deployment<T>, cfg: &SystemConfig<T>, ue: usize, opts: &McOptions) -> Result<()> {
    if ue >= dep.ues_in(dep.tagged_cell) {
        return Err(Error::domain("estimate_sinr_mc", "tagged UE index out of range"));
    }
    if dep.ue_counts().into_iter().any(|n| n > cfg.pilot_len) {
        return Err(Error::domain("estimate_sinr_mc", "a cell has more UEs than pilots"));
    }
    if opts.n_blocks < 2 {
        return Err(Error::domain("estimate_sinr_mc", "need at least two blocks"));
    }
    if opts.n_blocks < 100 {
        log::warn!("estimate_sinr_mc: {} blocks leave the variance terms unreliable", opts.n_blocks);
    }
    Ok(())
}

fn run_batches<T: Real>(
    dep: &Deployment<T>,
    cfg: &SystemConfig<T>,
    mode: PilotMode,
    k: usize,
    opts: &McOptions,
) -> Vec<Sums> {
    let m = cfg.antennas;
    let b = cfg.pilot_len;
    let t = dep.tagged_cell;
    let counts = dep.ue_counts();
    let book = PilotBook::<T>::new(b).expect("pilot length checked");
    let shift = m as f64 * dep.tagged_betas[t][k].as_f64();
    let p0k = dep.powers[t][k];
    let sizes = opts.batch_sizes();
    run_seeded(sizes.len(), opts.workers, opts.seed, |batch, rng| {
        let mut blk = ChannelBlock::new(dep, m, b);
        let mut y0 = CMatrix::zeros(m, b);
        let zero = Complex::new(T::zero(), T::zero());
        let mut hhat = vec![zero; m];
        let mut s = Sums::new(&counts, shift);
        s.intra = vec![0.0; counts[t]];
        let vk = book.sequence(k);
        for _ in 0..sizes[batch] {
            blk.sample(rng, dep, cfg, &book, mode, Some(k));
            pilot_phase_rx(&blk, &mut y0);
            ls_estimate(&y0, &book, k, p0k, true, &mut hhat);
            let dot = |h: &[Complex<T>]| -> Complex<f64> {
                let z: Complex<T> = h.iter().zip(&hhat).map(|(a, g)| a.conj() * g).sum();
                Complex::new(z.re.as_f64(), z.im.as_f64())
            };
            let x = dot(&blk.h[t][k]) - shift;
            s.x += x;
            s.x2 += x.norm_sqr();
            s.hhat2 += hhat.iter().map(|z| z.norm_sqr().as_f64()).sum::<f64>();
            for (j, cell) in blk.h.iter().enumerate() {
                for (i, h) in cell.iter().enumerate() {
                    if j == t {
                        if i != k && blk.activity.is_active(j, i) {
                            s.intra[i] += dot(h).norm_sqr();
                        }
                        continue;
                    }
                    if blk.activity.is_active(j, i) {
                        s.inter[j][i] += dot(h).norm_sqr();
                    }
                    let c: Complex<T> = blk.pilot_signals[j][i].iter().zip(vk).map(|(a, v)| *a * v.conj()).sum();
                    s.pilot_corr[j][i] += c.norm_sqr().as_f64();
                }
            }
            s.n += 1;
        }
        s
    })
}

fn summarize<T: Real>(
    dep: &Deployment<T>,
    cfg: &SystemConfig<T>,
    mode: PilotMode,
    k: usize,
    opts: &McOptions,
    batches: &[Sums],
) -> McEstimate {
    let mut total = Sums::new(&dep.ue_counts(), batches[0].shift);
    for b in batches {
        total.merge(b);
    }
    let breakdown = total.breakdown(dep, cfg, k);
    let sinr_std_err = if batches.len() > 1 {
        Summary::of(batches.iter().map(|b| b.breakdown(dep, cfg, k).sinr)).std_err()
    } else {
        f64::NAN
    };
    let n = total.n as f64;
    let g = total.mean_gain();
    McEstimate {
        ue: k,
        mode,
        n_blocks: total.n,
        seed: opts.seed,
        sinr_std_err,
        estimate_energy: total.hhat2 / n,
        gain_mean: [g.re, g.im],
        gain_variance: total.gain_variance(),
        pilot_correlation: total.pilot_corr.iter().map(|c| c.iter().map(|s| s / n).collect()).collect(),
        breakdown,
    }
}

/// Sample-mean estimate of the effective SINR of tagged-cell UE `ue`,
/// conditioned on that UE being active; every other activity indicator,
/// the fading, the interfering pilots and the noise are redrawn per block.
pub fn estimate_sinr_mc<T: Real>(
    dep: &Deployment<T>,
    cfg: &SystemConfig<T>,
    mode: PilotMode,
    ue: usize,
    opts: &McOptions,
) -> Result<McEstimate> {
    check_inputs(dep, cfg, ue, opts)?;
    let batches = run_batches(dep, cfg, mode, ue, opts);
    Ok(summarize(dep, cfg, mode, ue, opts, &batches))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub expected: f64,
    pub observed: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityCheck {
    fn new(name: &str, expected: f64, observed: f64, tolerance: f64) -> Self {
        let rel_err = (observed - expected).abs() / expected.abs();
        Self {
            name: name.to_string(),
            expected,
            observed,
            rel_err,
            tolerance,
            pass: rel_err <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AppendixTolerances {
    pub estimate_energy: f64,
    pub signal_gain: f64,
    pub second_moment: f64,
    pub gain_variance: f64,
    pub intra: f64,
    pub inter: f64,
    pub pilot_correlation: f64,
}

impl Default for AppendixTolerances {
    fn default() -> Self {
        Self {
            estimate_energy: 0.02,
            signal_gain: 0.02,
            second_moment: 0.03,
            gain_variance: 0.03,
            intra: 0.03,
            inter: 0.03,
            pilot_correlation: 0.02,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AppendixReport {
    pub mode: PilotMode,
    pub ue: usize,
    pub checks: Vec<IdentityCheck>,
}

impl AppendixReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Compare the Monte-Carlo moments of the LS/MR chain with their closed
/// forms: estimate energy, signal gain, gain second moment and variance,
/// intra- and inter-cell terms (totals and the worst single UE) and the
/// pilot-correlation energy `p_ji B`.
pub fn appendix_term_checks<T: Real>(
    dep: &Deployment<T>,
    cfg: &SystemConfig<T>,
    mode: PilotMode,
    ue: usize,
    opts: &McOptions,
    tol: &AppendixTolerances,
) -> Result<AppendixReport> {
    let est = estimate_sinr_mc(dep, cfg, mode, ue, opts)?;
    appendix_checks_for(dep, cfg, &est, tol)
}

/// [`appendix_term_checks`] on an existing estimate.
pub fn appendix_checks_for<T: Real>(
    dep: &Deployment<T>,
    cfg: &SystemConfig<T>,
    est: &McEstimate,
    tol: &AppendixTolerances,
) -> Result<AppendixReport> {
    let (mode, ue) = (est.mode, est.ue);
    let cf = sinr_closed_form(dep, cfg, ue)?;
    let t = dep.tagged_cell;
    let m = cfg.antennas as f64;
    let beta = dep.tagged_betas[t][ue].as_f64();
    let energy = estimate_energy(dep, cfg, ue)?.as_f64();
    let gain2 = est.gain_mean[0].powi(2) + est.gain_mean[1].powi(2);
    let second = est.gain_variance * (est.n_blocks as f64 - 1.0) / est.n_blocks as f64 + gain2;

    let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
    // (expected, observed) of the UE with the largest relative error
    let worst = |obs: &[f64], exp: &[f64]| {
        obs.iter()
            .zip(exp)
            .filter(|(_, e)| **e > 0.0)
            .map(|(o, e)| (*e, *o))
            .max_by(|a, b| rel(a.1, a.0).total_cmp(&rel(b.1, b.0)))
    };
    let cf_intra: Vec<f64> = cf.intra.iter().map(|x| x.as_f64()).collect();
    let cf_inter: Vec<f64> = cf.inter.iter().flatten().map(|x| x.as_f64()).collect();
    let mc_inter: Vec<f64> = est.breakdown.inter.iter().flatten().copied().collect();

    let mut pilot_obs = 0.0;
    let mut pilot_exp = 0.0;
    for j in dep.interfering_cells() {
        for (i, c) in est.pilot_correlation[j].iter().enumerate() {
            pilot_obs += c;
            pilot_exp += dep.powers[j][i].as_f64() * cfg.pilot_len as f64;
        }
    }

    let mut checks = vec![
        IdentityCheck::new("estimate_energy", energy, est.estimate_energy, tol.estimate_energy),
        IdentityCheck::new("signal_gain", m * m * beta * beta, gain2, tol.signal_gain),
        IdentityCheck::new("gain_second_moment", m * m * beta * beta + beta * energy, second, tol.second_moment),
        // beta E||hhat||^2 + M^2 beta^2 - |E h^H hhat|^2 with the two
        // closed-form moments above; the last two terms cancel
        IdentityCheck::new("gain_variance", beta * energy, est.gain_variance, tol.gain_variance),
    ];
    if let Some((e, o)) = worst(&est.breakdown.intra, &cf_intra) {
        checks.push(IdentityCheck::new(
            "intra_cell",
            cf.intra_total().as_f64(),
            est.breakdown.intra_total(),
            tol.intra,
        ));
        checks.push(IdentityCheck::new("intra_cell_worst_ue", e, o, tol.intra));
    }
    if let Some((e, o)) = worst(&mc_inter, &cf_inter) {
        checks.push(IdentityCheck::new(
            "inter_cell",
            cf.inter_total().as_f64(),
            est.breakdown.inter_total(),
            tol.inter,
        ));
        checks.push(IdentityCheck::new("inter_cell_worst_ue", e, o, tol.inter));
    }
    if pilot_exp > 0.0 {
        checks.push(IdentityCheck::new(
            "pilot_correlation",
            pilot_exp,
            pilot_obs,
            tol.pilot_correlation,
        ));
    }
    Ok(AppendixReport { mode, ue, checks })
}
