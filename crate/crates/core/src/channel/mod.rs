//! Propagation model: path loss, UPA steering vectors, and Rician small-scale fading.

mod scenario;

pub use scenario::{parse_power, LinkGeometry, LinkOverrides, LosAngles, Point3, ScenarioConfig};

use std::f64::consts::TAU;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{c, cis, CVector, C64};
use crate::rng::complex_gaussian;

/// Above this Rician factor the scattered component is dropped entirely.
pub const PURE_LOS_KAPPA: f64 = 1e12;

/// Large-scale loss `l0 + 10·a·log10(d/d0)` in dB.
pub fn path_loss_db(d: f64, exponent: f64, l0_db: f64, d0: f64) -> Result<f64> {
    if !(d > 0.0) || !(d0 > 0.0) {
        return Err(Error::Domain(format!("path loss needs positive distances, got d={d}, d0={d0}")));
    }
    Ok(l0_db + 10.0 * exponent * (d / d0).log10())
}

/// Amplitude factor `sqrt(10^(−L/10))` for a loss in dB.
pub fn amplitude_from_loss_db(loss_db: f64) -> f64 {
    10f64.powf(-loss_db / 20.0)
}

/// Unit-norm UPA response for an `n_y × n_z` grid; element `(iy, iz)` lives at
/// index `iy·n_z + iz`.
pub fn upa_response(phi: f64, omega: f64, n_y: usize, n_z: usize, spacing_ratio: f64) -> CVector {
    let n = n_y * n_z;
    let scale = 1.0 / (n as f64).sqrt();
    let ky = TAU * spacing_ratio * phi.sin() * omega.sin();
    let kz = TAU * spacing_ratio * omega.cos();
    CVector::from_fn(n, |idx, _| {
        let iy = (idx / n_z) as f64;
        let iz = (idx % n_z) as f64;
        cis(ky * iy + kz * iz) * scale
    })
}

/// `sqrt(κ/(1+κ))·los + sqrt(1/(1+κ))·w` with `w` i.i.d. CN(0, 1).
pub fn draw_rician<R: Rng + ?Sized>(los: &CVector, kappa: f64, rng: &mut R) -> Result<CVector> {
    if !(kappa >= 0.0) {
        return Err(Error::Domain(format!("Rician factor must be nonnegative, got {kappa}")));
    }
    if kappa >= PURE_LOS_KAPPA {
        return Ok(los.clone());
    }
    let los_w = (kappa / (1.0 + kappa)).sqrt();
    let nlos_w = (1.0 / (1.0 + kappa)).sqrt();
    Ok(CVector::from_fn(los.len(), |i, _| los[i] * los_w + complex_gaussian(rng) * nlos_w))
}

/// Propagation state for one fading block.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    /// AP → IRS.
    pub g: CVector,
    /// IRS → user k (the reflected term is `m_kᴴ·diag(v*)·g`).
    pub m: Vec<CVector>,
    /// AP → user k.
    pub h: Vec<C64>,
    /// Noise power per user in watts.
    pub sigma2: Vec<f64>,
}

impl ChannelSet {
    pub fn new(g: CVector, m: Vec<CVector>, h: Vec<C64>, sigma2: Vec<f64>) -> Result<Self> {
        let n = g.len();
        let k = h.len();
        if n == 0 {
            return Err(Error::Config("IRS must have at least one element".into()));
        }
        if k < 2 {
            return Err(Error::Config(format!("need at least 2 users, got {k}")));
        }
        if m.len() != k {
            return Err(Error::Dimension { expected: k, got: m.len() });
        }
        if sigma2.len() != k {
            return Err(Error::Dimension { expected: k, got: sigma2.len() });
        }
        if let Some(bad) = m.iter().find(|mk| mk.len() != n) {
            return Err(Error::Dimension { expected: n, got: bad.len() });
        }
        if sigma2.iter().any(|&s| !(s.is_finite() && s > 0.0)) {
            return Err(Error::Config("noise powers must be strictly positive".into()));
        }
        Ok(ChannelSet { g, m, h, sigma2 })
    }

    pub fn n(&self) -> usize {
        self.g.len()
    }

    pub fn k(&self) -> usize {
        self.h.len()
    }

    /// Same block with the IRS removed (all reflected paths zero).
    pub fn without_irs(&self) -> ChannelSet {
        let zero = CVector::zeros(self.n());
        ChannelSet { m: vec![zero; self.k()], ..self.clone() }
    }

    /// Reorders users so `user` becomes the confidential-service user; the others keep
    /// their relative order.
    pub fn with_confidential_user(&self, user: usize) -> Result<ChannelSet> {
        if user >= self.k() {
            return Err(Error::Domain(format!("user index {user} out of range")));
        }
        let mut order = vec![user];
        order.extend((0..self.k()).filter(|&k| k != user));
        Ok(ChannelSet {
            g: self.g.clone(),
            m: order.iter().map(|&k| self.m[k].clone()).collect(),
            h: order.iter().map(|&k| self.h[k]).collect(),
            sigma2: order.iter().map(|&k| self.sigma2[k]).collect(),
        })
    }
}

/// Draws one fading block for `config`. Draw order: every `h_k`, then `g`, then every `m_k`.
pub fn generate_channels<R: Rng + ?Sized>(config: &ScenarioConfig, rng: &mut R) -> Result<ChannelSet> {
    config.validate()?;
    let geo = config.geometry()?;
    let kappa = config.rician_kappa;
    let (l0, d0) = (config.reference_loss_db, config.reference_distance_m);
    let spacing = config.element_spacing_over_wavelength;

    let irs_amp = |d: f64| -> Result<f64> {
        Ok(amplitude_from_loss_db(path_loss_db(d, config.pathloss_exponent_irs, l0, d0)?))
    };
    let direct_amp = |d: f64| -> Result<f64> {
        Ok(amplitude_from_loss_db(path_loss_db(d, config.pathloss_exponent_direct, l0, d0)?))
    };

    // Direct links come first so that, for a given stream, they do not depend on N.
    let los_h = CVector::from_element(1, c(1.0, 0.0));
    let h = (0..config.num_users())
        .map(|k| Ok(draw_rician(&los_h, kappa, rng)?[0] * direct_amp(geo.ap_user_m[k])?))
        .collect::<Result<Vec<_>>>()?;

    let aoa = geo.ap_irs_aoa;
    let los_g = upa_response(aoa.azimuth, aoa.elevation, config.n_y, config.n_z, spacing);
    let g = draw_rician(&los_g, kappa, rng)? * c(irs_amp(geo.ap_irs_m)?, 0.0);

    let mut m = Vec::with_capacity(config.num_users());
    for k in 0..config.num_users() {
        let aod = geo.irs_user_aod[k];
        // The row channel mₖᴴ has LoS part a_tᴴ, so the column mₖ carries a_t itself.
        let los_m = upa_response(aod.azimuth, aod.elevation, config.n_y, config.n_z, spacing);
        // Conjugating a circular Gaussian leaves its law unchanged, so drawing the
        // column directly is equivalent.
        m.push(draw_rician(&los_m, kappa, rng)? * c(irs_amp(geo.irs_user_m[k])?, 0.0));
    }
    ChannelSet::new(g, m, h, config.noise_powers_w.clone())
}
