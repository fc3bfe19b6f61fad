//! Scene builders and brute-force reference formulas shared by the
//! integration tests. The reference formulas deliberately avoid the
//! library's geometry helpers and work on plain arrays.
#![allow(dead_code)]

use epipolar::geometry::row_major;
use epipolar::rng::Prng;
use epipolar::{
    generate_scene, CameraIntrinsics, CameraRig, CorrespondenceSet, Mat3, RelativePose, Scene,
    SceneConfig, Vec3,
};

/// Stereo-like rig with a random small rotation, baseline and focal length.
pub fn random_rig(rng: &mut Prng) -> CameraRig {
    let f = rng.uniform_in(500.0, 900.0);
    let k1 = CameraIntrinsics::new(f, f * rng.uniform_in(0.98, 1.02), 620.0, 187.0);
    let f2 = f * rng.uniform_in(0.95, 1.05);
    let k2 = CameraIntrinsics::new(f2, f2, rng.uniform_in(600.0, 640.0), rng.uniform_in(175.0, 200.0));
    let pose = RelativePose::from_euler_deg(
        rng.uniform_in(-3.0, 3.0),
        rng.uniform_in(-3.0, 3.0),
        rng.uniform_in(-3.0, 3.0),
        Vec3::new(
            rng.uniform_in(-1.0, -0.2),
            rng.uniform_in(-0.1, 0.1),
            rng.uniform_in(-0.3, 0.3),
        ),
    );
    CameraRig { k1, k2, pose }
}

pub fn scene_config(seed: u64, noise_sigma: f64, outlier_fraction: f64) -> SceneConfig {
    let mut rng = Prng::new(seed ^ 0x9e37_79b9_7f4a_7c15);
    SceneConfig {
        seed,
        noise_sigma,
        outlier_fraction,
        rig: random_rig(&mut rng),
        ..SceneConfig::default()
    }
}

pub fn scene(seed: u64, noise_sigma: f64, outlier_fraction: f64) -> Scene {
    generate_scene(&scene_config(seed, noise_sigma, outlier_fraction)).expect("scene generates")
}

pub fn arr(f: &Mat3) -> [[f64; 3]; 3] {
    let v = row_major(f);
    [[v[0], v[1], v[2]], [v[3], v[4], v[5]], [v[6], v[7], v[8]]]
}

/// `F (x, y, 1)^T`.
pub fn line(f: &[[f64; 3]; 3], x: f64, y: f64) -> [f64; 3] {
    let mut l = [0.0; 3];
    for (r, out) in l.iter_mut().enumerate() {
        *out = f[r][0] * x + f[r][1] * y + f[r][2];
    }
    l
}

/// `F^T (x', y', 1)^T`.
pub fn line_t(f: &[[f64; 3]; 3], x: f64, y: f64) -> [f64; 3] {
    let mut l = [0.0; 3];
    for (c, out) in l.iter_mut().enumerate() {
        *out = f[0][c] * x + f[1][c] * y + f[2][c];
    }
    l
}

pub fn residual(f: &[[f64; 3]; 3], m: (f64, f64), mp: (f64, f64)) -> f64 {
    let l = line(f, m.0, m.1);
    mp.0 * l[0] + mp.1 * l[1] + l[2]
}

pub fn sed(f: &[[f64; 3]; 3], m: (f64, f64), mp: (f64, f64)) -> f64 {
    let r = residual(f, m, mp);
    let a = line(f, m.0, m.1);
    let b = line_t(f, mp.0, mp.1);
    r * r * (1.0 / (a[0] * a[0] + a[1] * a[1]) + 1.0 / (b[0] * b[0] + b[1] * b[1]))
}

pub fn pairs(set: &CorrespondenceSet) -> Vec<((f64, f64), (f64, f64))> {
    set.iter()
        .map(|p| ((p.m.x, p.m.y), (p.m_prime.x, p.m_prime.y)))
        .collect()
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Independent rank and canonical-form check: singular values from the
/// eigenvalues of `F^T F` would lose precision, so this uses an SVD but
/// locates the pivot with its own scan.
pub fn canonical_ok(m: &Mat3) -> bool {
    let sv = m.singular_values();
    let (smax, smin) = (sv.max(), sv.min());
    let mut best = 0usize;
    let v = row_major(m);
    for i in 1..9 {
        if v[i].abs() > v[best].abs() {
            best = i;
        }
    }
    smin / smax <= 1e-9 && v[best] == 1.0
}
