//! 2×2 complex matrices and the single-qubit decompositions built on them.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::circuit::GateKind;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Row-major 2×2 matrix: `m[row][col]`.
pub type Mat2 = [[C64; 2]; 2];

pub fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn identity() -> Mat2 {
    [[ONE, ZERO], [ZERO, ONE]]
}

pub fn pauli_x() -> Mat2 {
    [[ZERO, ONE], [ONE, ZERO]]
}

pub fn hadamard() -> Mat2 {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

pub fn rz(theta: f64) -> Mat2 {
    [
        [C64::from_polar(1.0, -theta / 2.0), ZERO],
        [ZERO, C64::from_polar(1.0, theta / 2.0)],
    ]
}

pub fn ry(theta: f64) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        [C64::new(c, 0.0), C64::new(-s, 0.0)],
        [C64::new(s, 0.0), C64::new(c, 0.0)],
    ]
}

/// `X^t = H · diag(1, e^{iπt}) · H`.
pub fn x_power(t: f64) -> Mat2 {
    let e = C64::from_polar(1.0, PI * t);
    let p = (ONE + e) * 0.5;
    let m = (ONE - e) * 0.5;
    [[p, m], [m, p]]
}

pub fn sx() -> Mat2 {
    x_power(0.5)
}

/// Exponent of the X-root applied by an `McxRoot` gate.
pub fn root_exponent(root: u32, dagger: bool) -> f64 {
    let t = 1.0 / (1u64 << root) as f64;
    if dagger {
        -t
    } else {
        t
    }
}

/// Target-qubit matrix of a one-target gate; `None` for SWAP and non-unitary kinds.
pub fn target_matrix(kind: &GateKind) -> Option<Mat2> {
    Some(match *kind {
        GateKind::X | GateKind::Cx | GateKind::Ccx | GateKind::Mcx(_) => pauli_x(),
        GateKind::Sx => sx(),
        GateKind::Id => identity(),
        GateKind::Rz(theta) => rz(theta),
        GateKind::H => hadamard(),
        GateKind::McxRoot { root, dagger, .. } => x_power(root_exponent(root, dagger)),
        GateKind::Swap | GateKind::Reset | GateKind::Measure => return None,
    })
}

pub fn is_diagonal(m: &Mat2) -> bool {
    m[0][1].norm_sqr() < 1e-30 && m[1][0].norm_sqr() < 1e-30
}

/// `U = e^{iα} · RZ(β) · RY(γ) · RZ(δ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZyzAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

pub fn zyz(u: &Mat2) -> ZyzAngles {
    let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
    let alpha = det.arg() / 2.0;
    let phase = C64::from_polar(1.0, -alpha);
    let v00 = u[0][0] * phase;
    let v10 = u[1][0] * phase;
    let v11 = u[1][1] * phase;
    let gamma = 2.0 * v10.norm().atan2(v00.norm());
    // v11 = e^{i(β+δ)/2} cos(γ/2), v10 = e^{i(β-δ)/2} sin(γ/2)
    let sum = if v11.norm() > 1e-12 {
        2.0 * v11.arg()
    } else {
        0.0
    };
    let diff = if v10.norm() > 1e-12 {
        2.0 * v10.arg()
    } else {
        0.0
    };
    ZyzAngles {
        alpha,
        beta: (sum + diff) / 2.0,
        gamma,
        delta: (sum - diff) / 2.0,
    }
}

fn is_zero_angle(theta: f64) -> bool {
    let r = theta.rem_euclid(2.0 * PI);
    r < 1e-12 || 2.0 * PI - r < 1e-12
}

/// Lowers an arbitrary single-qubit unitary to `RZ · SX · RZ · SX · RZ`
/// (time order), up to global phase. Diagonal inputs become one RZ and
/// zero-angle rotations are omitted.
pub fn euler_basis(u: &Mat2) -> Vec<GateKind> {
    let a = zyz(u);
    let mut out = Vec::with_capacity(5);
    let rz_push = |theta: f64, out: &mut Vec<GateKind>| {
        if !is_zero_angle(theta) {
            out.push(GateKind::Rz(normalize_angle(theta)));
        }
    };
    if a.gamma.abs() < 1e-12 {
        rz_push(a.beta + a.delta, &mut out);
        return out;
    }
    rz_push(a.delta, &mut out);
    out.push(GateKind::Sx);
    rz_push(a.gamma + PI, &mut out);
    out.push(GateKind::Sx);
    rz_push(a.beta + PI, &mut out);
    out
}

/// Maps an angle into `(-π, π]`.
pub fn normalize_angle(theta: f64) -> f64 {
    let mut r = theta.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    r
}

/// Whether `a = e^{iφ} b` for some global phase φ, elementwise within `tol`.
pub fn equal_up_to_phase(a: &[C64], b: &[C64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let Some((i, _)) = a
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm_sqr().total_cmp(&y.1.norm_sqr()))
    else {
        return true;
    };
    if a[i].norm() < tol {
        return b.iter().all(|z| z.norm() <= tol);
    }
    if b[i].norm() < tol {
        return false;
    }
    let phase = (b[i] / a[i]).unscale((b[i] / a[i]).norm());
    a.iter().zip(b).all(|(x, y)| (x * phase - y).norm() <= tol)
}
