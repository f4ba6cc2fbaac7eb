//! Seeded random generators shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use maslov_core::linalg;
use maslov_core::maslov::LagrangianPath;
use maslov_core::symplectic::{LagrangianPlane, SymplecticSpace};
use maslov_core::{CMatrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Seed from `MASLOV_SEED`, falling back to a fixed value.
pub fn seed() -> u64 {
    std::env::var("MASLOV_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(20_240_917)
}

pub fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed() ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    })
}

/// Haar-distributed unitary via QR with phase correction.
pub fn haar_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let qr = gaussian(rng, n, n).qr();
    let (q, r) = (qr.q(), qr.r());
    let mut d = CMatrix::zeros(n, n);
    for i in 0..n {
        let z = r[(i, i)];
        d[(i, i)] = if z.norm() > 0.0 { z / z.norm() } else { C64::new(1.0, 0.0) };
    }
    q * d
}

pub fn hermitian(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> CMatrix {
    let g = gaussian(rng, n, n);
    (&g + g.adjoint()) * C64::new(0.5 * scale, 0.0)
}

pub fn random_plane(rng: &mut ChaCha8Rng, space: &SymplecticSpace) -> LagrangianPlane {
    LagrangianPlane::from_graph(space, &haar_unitary(rng, space.half_dim())).unwrap()
}

/// A unitary `W` with exactly `k` eigenvalues equal to one and the others at
/// phases bounded away from zero.
pub fn unitary_with_fixed_space(rng: &mut ChaCha8Rng, n: usize, k: usize) -> CMatrix {
    let x = haar_unitary(rng, n);
    let mut d = CMatrix::identity(n, n);
    for i in k..n {
        let phase = 0.2 + (2.0 * PI - 0.4) * rng.random::<f64>();
        d[(i, i)] = C64::from_polar(1.0, phase);
    }
    &x * d * x.adjoint()
}

/// `s -> graph(U0 exp(i s H))` on `[0, 1]`.
pub fn random_path(rng: &mut ChaCha8Rng, space: &SymplecticSpace, strength: f64) -> LagrangianPath {
    let n = space.half_dim();
    let u0 = haar_unitary(rng, n);
    let h = hermitian(rng, n, strength);
    let sp = space.clone();
    LagrangianPath::new(space, 0.0, 1.0, move |s| {
        let step = linalg::hermitian_function(&h, |x| C64::from_polar(1.0, s * x));
        LagrangianPlane::from_graph(&sp, &(&u0 * step))
    })
    .unwrap()
}
