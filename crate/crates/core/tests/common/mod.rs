#![allow(dead_code)]

use std::f64::consts::TAU;

use num_complex::Complex;
use rand::Rng;
use slm_dqc1::{Mask, PanelDims, Profile};

pub fn random_mask<R: Rng>(rng: &mut R, dims: PanelDims) -> Mask {
    let phases = (0..dims.pixel_count()).map(|_| rng.random::<f64>() * TAU).collect();
    Mask::from_phases(dims, phases).unwrap()
}

pub fn random_profile<R: Rng>(rng: &mut R, dims: PanelDims) -> Profile {
    let weights = (0..dims.pixel_count()).map(|_| rng.random::<f64>() + 1e-3).collect();
    Profile::from_weights(dims, weights).unwrap()
}

type Mat2 = [[Complex<f64>; 2]; 2];

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// Brute-force reference: builds the post-modulator polarization block of every pixel
/// explicitly, sums them with the beam weights, dephases the coherences and reads
/// `Tr(ρ σx)` and `Tr(ρ σy)` by matrix products. Plain serial `f64` sums throughout.
pub fn naive_expectations(mask: &Mask, profile: &Profile, p: f64) -> (f64, f64) {
    let zero = Complex::new(0.0, 0.0);
    let mut rho: Mat2 = [[zero; 2]; 2];
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for (phi, c) in mask.phases().iter().zip(profile.weights()) {
        // S (|+⟩ ⊗ |pixel⟩) = (e^{-iφ}|H⟩ + |V⟩)/√2 ⊗ |pixel⟩.
        let psi = [Complex::from_polar(s, -phi), Complex::new(s, 0.0)];
        for i in 0..2 {
            for j in 0..2 {
                rho[i][j] += psi[i] * psi[j].conj() * *c;
            }
        }
    }
    rho[0][1] *= 1.0 - 2.0 * p;
    rho[1][0] *= 1.0 - 2.0 * p;

    let i = Complex::new(0.0, 1.0);
    let sx: Mat2 = [[zero, Complex::new(1.0, 0.0)], [Complex::new(1.0, 0.0), zero]];
    let sy: Mat2 = [[zero, -i], [i, zero]];
    let tr = |m: Mat2| (m[0][0] + m[1][1]).re;
    (tr(mat_mul(&rho, &sx)), tr(mat_mul(&rho, &sy)))
}
