//! Parameter profiles and their clamps.

use num_rational::Ratio;

use crate::egq::{w_range, EstimateTable};
use crate::expander::{phi_from_f64, Phi};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Profile {
    /// `r = √(M/N)`, `k = √N`, `φ_w = √(N/M)`.
    #[default]
    Bound1,
    /// `r = √M / N^{1/6}`, `k = √M·log³N / N^{1/6}`, `φ_w = √M / (N^{1/6} w)`.
    Bound2,
}

#[derive(Clone, Debug)]
pub struct AlgoParams {
    pub gamma: u32,
    pub profile: Profile,
    /// Re-query every estimate that is not certified before assembling stars.
    pub repair: bool,
    pub seed: u64,
    /// Replaces the profile's `r` (still raised to `⌈1/φ_w⌉`).
    pub room: Option<usize>,
    /// Replaces every expander decomposition by singleton clusters.
    pub singleton_decomposition: bool,
    /// Called on every estimate table right before the repair pass.
    pub corrupt: Option<fn(&mut EstimateTable)>,
}

impl Default for AlgoParams {
    fn default() -> Self {
        AlgoParams {
            gamma: 3,
            profile: Profile::Bound1,
            repair: true,
            seed: 0,
            room: None,
            singleton_decomposition: false,
            corrupt: None,
        }
    }
}

/// Values actually used, after clamping.
#[derive(Clone, Debug, PartialEq)]
pub struct Derived {
    pub r: usize,
    pub k: u64,
    /// `(w, φ_w)` for every scale.
    pub scales: Vec<(u64, Phi)>,
    pub raw_r: f64,
    pub raw_k: f64,
}

const PHI_CAP: (u64, u64) = (1, 4);

pub fn derive_params(n: usize, m: usize, params: &AlgoParams) -> Derived {
    let nf = n.max(2) as f64;
    let mf = m.max(1) as f64;
    let sixth = nf.powf(1.0 / 6.0);
    let (raw_r, raw_k) = match params.profile {
        Profile::Bound1 => ((mf / nf).sqrt(), nf.sqrt()),
        Profile::Bound2 => (mf.sqrt() / sixth, mf.sqrt() * nf.log2().powi(3) / sixth),
    };
    let k = (raw_k.floor() as u64).max(2);
    let cap = Ratio::new(PHI_CAP.0, PHI_CAP.1);
    let scales: Vec<(u64, Phi)> = w_range(k, n)
        .into_iter()
        .map(|w| {
            let raw = match params.profile {
                Profile::Bound1 => (nf / mf).sqrt(),
                Profile::Bound2 => mf.sqrt() / (sixth * w as f64),
            };
            let phi = phi_from_f64(raw).min(cap);
            (
                w,
                if *phi.numer() == 0 {
                    Ratio::new(1, 1_000_000)
                } else {
                    phi
                },
            )
        })
        .collect();
    let inv = scales
        .iter()
        .map(|(_, phi)| (Ratio::new(1, 1) / *phi).ceil().to_integer() as usize)
        .max()
        .unwrap_or(0);
    let base = params.room.unwrap_or(raw_r.ceil() as usize);
    Derived {
        r: base.max(inv).max(4),
        k,
        scales,
        raw_r,
        raw_k,
    }
}
