use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Deployment;
use crate::model::{ActivityPattern, PilotBook, SystemConfig};
use crate::real::Real;

/// Pilot signalling of the interfering cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PilotMode {
    /// Every cell sends pilots at the same time, each picking a random
    /// subset of the pilot book (at most one UE per pilot and cell).
    Sync,
    /// Interfering UEs send arbitrary symbols during the tagged cell's
    /// pilot phase, drawn `CN(0, p_ji)` per entry.
    Async,
}

impl PilotMode {
    pub const ALL: [PilotMode; 2] = [PilotMode::Sync, PilotMode::Async];

    pub fn as_str(self) -> &'static str {
        match self {
            PilotMode::Sync => "sync",
            PilotMode::Async => "async",
        }
    }
}

impl fmt::Display for PilotMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PilotMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sync" => Ok(Self::Sync),
            "async" => Ok(Self::Async),
            other => Err(Error::Parse(format!("unknown pilot mode {other:?}"))),
        }
    }
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Complex<T> {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Complex<T>] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [Complex<T>] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn fill_zero(&mut self) {
        self.data.fill(Complex::new(T::zero(), T::zero()));
    }

    /// `self += u w^T`.
    pub fn add_outer(&mut self, u: &[Complex<T>], w: &[Complex<T>]) {
        debug_assert_eq!(u.len(), self.rows);
        debug_assert_eq!(w.len(), self.cols);
        for (r, &ur) in u.iter().enumerate() {
            for (y, &wc) in self.row_mut(r).iter_mut().zip(w) {
                *y = *y + ur * wc;
            }
        }
    }

    /// `self * conj(v)`.
    pub fn mul_conj(&self, v: &[Complex<T>], out: &mut [Complex<T>]) {
        for (r, o) in out.iter_mut().enumerate() {
            *o = self.row(r).iter().zip(v).map(|(y, x)| *y * x.conj()).sum();
        }
    }

    pub fn frobenius2(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// `CN(0, var)` draw.
#[inline]
pub fn complex_normal<T: Real, R: Rng + ?Sized>(rng: &mut R, var: T) -> Complex<T> {
    let s = (var * T::lit(0.5)).sqrt();
    let re = T::std_normal(rng);
    let im = T::std_normal(rng);
    Complex::new(re * s, im * s)
}

/// One coherence block seen at the tagged BS.
///
/// `h[j][i]` is the channel from UE `i` of cell `j` to the tagged BS; the
/// other BSs' channels never enter the tagged cell's SINR and are not
/// drawn. `pilot_signals[j][i]` is what that UE sends during the tagged
/// cell's pilot phase (already scaled by `sqrt(p_ji)`).
#[derive(Debug, Clone)]
pub struct ChannelBlock<T> {
    pub h: Vec<Vec<Vec<Complex<T>>>>,
    pub activity: ActivityPattern,
    pub pilot_signals: Vec<Vec<Vec<Complex<T>>>>,
    /// Pilot index used by each UE (sync mode and the tagged cell).
    pub pilot_index: Vec<Vec<Option<usize>>>,
    pub noise: CMatrix<T>,
}

impl<T: Real> ChannelBlock<T> {
    /// Zeroed buffers sized for `dep`.
    pub fn new(dep: &Deployment<T>, antennas: usize, pilot_len: usize) -> Self {
        let counts = dep.ue_counts();
        let zero = Complex::new(T::zero(), T::zero());
        let per_ue = |len: usize| -> Vec<Vec<Vec<Complex<T>>>> {
            counts.iter().map(|&n| vec![vec![zero; len]; n]).collect()
        };
        Self {
            h: per_ue(antennas),
            activity: ActivityPattern::all_inactive(&counts),
            pilot_signals: per_ue(pilot_len),
            pilot_index: counts.iter().map(|&n| vec![None; n]).collect(),
            noise: CMatrix::zeros(antennas, pilot_len),
        }
    }

    /// Draw fading, activity, pilot signals and noise for a new block.
    ///
    /// The tagged cell's UE `i` always uses pilot `i`. `force_active`
    /// pins one tagged-cell UE to active.
    #[allow(clippy::too_many_arguments)]
    pub fn sample<R: Rng + ?Sized>(
        &mut self,
        rng: &mut R,
        dep: &Deployment<T>,
        cfg: &SystemConfig<T>,
        book: &PilotBook<T>,
        mode: PilotMode,
        force_active: Option<usize>,
    ) {
        let tagged = dep.tagged_cell;
        let b = book.len();
        for (j, cell) in self.h.iter_mut().enumerate() {
            for (i, h) in cell.iter_mut().enumerate() {
                let beta = dep.tagged_betas[j][i];
                for z in h.iter_mut() {
                    *z = complex_normal(rng, beta);
                }
            }
        }
        self.activity.resample(rng, cfg.activity);
        if let Some(k) = force_active {
            self.activity.flags[tagged][k] = true;
        }
        for (j, cell) in self.pilot_signals.iter_mut().enumerate() {
            let n = cell.len();
            if j == tagged {
                for (i, s) in cell.iter_mut().enumerate() {
                    let amp = dep.powers[j][i].sqrt();
                    for (z, v) in s.iter_mut().zip(book.sequence(i)) {
                        *z = *v * amp;
                    }
                    self.pilot_index[j][i] = Some(i);
                }
                continue;
            }
            match mode {
                PilotMode::Sync => {
                    let picks = index::sample(rng, b, n);
                    for (i, (s, pick)) in cell.iter_mut().zip(picks.iter()).enumerate() {
                        let amp = dep.powers[j][i].sqrt();
                        for (z, v) in s.iter_mut().zip(book.sequence(pick)) {
                            *z = *v * amp;
                        }
                        self.pilot_index[j][i] = Some(pick);
                    }
                }
                PilotMode::Async => {
                    for (i, s) in cell.iter_mut().enumerate() {
                        let p = dep.powers[j][i];
                        for z in s.iter_mut() {
                            *z = complex_normal(rng, p);
                        }
                        self.pilot_index[j][i] = None;
                    }
                }
            }
        }
        let s2 = cfg.sigma2;
        for r in 0..self.noise.rows() {
            for z in self.noise.row_mut(r) {
                *z = complex_normal(rng, s2);
            }
        }
    }
}

/// Received pilot-phase matrix `Y0` (`M x B`) at the tagged BS: the sum of
/// `h s^T` over active UEs plus noise. Inactive UEs send nothing.
pub fn pilot_phase_rx<T: Real>(block: &ChannelBlock<T>, out: &mut CMatrix<T>) {
    out.clone_from(&block.noise);
    for (j, cell) in block.h.iter().enumerate() {
        for (i, h) in cell.iter().enumerate() {
            if block.activity.is_active(j, i) {
                out.add_outer(h, &block.pilot_signals[j][i]);
            }
        }
    }
}

/// LS estimate `a_0k / (sqrt(p_0k) B) * Y0 conj(v_k)`; zero when the UE is
/// inactive.
pub fn ls_estimate<T: Real>(
    y0: &CMatrix<T>,
    book: &PilotBook<T>,
    k: usize,
    p0k: T,
    active: bool,
    out: &mut [Complex<T>],
) {
    if !active {
        out.fill(Complex::new(T::zero(), T::zero()));
        return;
    }
    y0.mul_conj(book.sequence(k), out);
    let scale = (p0k.sqrt() * T::from_usize_lossy(book.len())).recip();
    for z in out.iter_mut() {
        *z = *z * scale;
    }
}
