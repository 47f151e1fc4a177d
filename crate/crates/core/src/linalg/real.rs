//! Real 3-vectors and 3x3 matrices (Bloch vectors and correlation matrices).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec3 = [f64; 3];
/// Row-major: `m[i][j]`.
pub type Mat3 = [[f64; 3]; 3];

pub const ZERO3: Vec3 = [0.0; 3];
pub const ZERO33: Mat3 = [[0.0; 3]; 3];

pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub fn scale(a: &Vec3, k: f64) -> Vec3 {
    [a[0] * k, a[1] * k, a[2] * k]
}

pub fn add(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn max_abs_diff(a: &Vec3, b: &Vec3) -> f64 {
    (0..3).map(|i| (a[i] - b[i]).abs()).fold(0.0, f64::max)
}

/// `m v`
pub fn mat_vec(m: &Mat3, v: &Vec3) -> Vec3 {
    [dot(&m[0], v), dot(&m[1], v), dot(&m[2], v)]
}

/// `m^T v`
pub fn mat_t_vec(m: &Mat3, v: &Vec3) -> Vec3 {
    let mut out = ZERO3;
    for (i, row) in m.iter().enumerate() {
        for j in 0..3 {
            out[j] += row[j] * v[i];
        }
    }
    out
}

pub fn transpose(m: &Mat3) -> Mat3 {
    let mut t = ZERO33;
    for i in 0..3 {
        for j in 0..3 {
            t[j][i] = m[i][j];
        }
    }
    t
}

pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = ZERO33;
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn outer(a: &Vec3, b: &Vec3) -> Mat3 {
    let mut out = ZERO33;
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[i] * b[j];
        }
    }
    out
}

pub fn mat_add(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = *a;
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] += b[i][j];
        }
    }
    out
}

/// Sum of squared entries.
pub fn frobenius_sq(m: &Mat3) -> f64 {
    m.iter().flatten().map(|x| x * x).sum()
}

pub fn mat_max_abs_diff(a: &Mat3, b: &Mat3) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn diag3(d: &Vec3) -> Mat3 {
    [[d[0], 0.0, 0.0], [0.0, d[1], 0.0], [0.0, 0.0, d[2]]]
}

/// A real 3-vector of unit Euclidean length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct UnitVector(Vec3);

impl UnitVector {
    pub const X: UnitVector = UnitVector([1.0, 0.0, 0.0]);
    pub const Y: UnitVector = UnitVector([0.0, 1.0, 0.0]);
    pub const Z: UnitVector = UnitVector([0.0, 0.0, 1.0]);

    /// Normalizes `v`; rejects the zero vector and non-finite input.
    pub fn new(v: Vec3) -> Result<Self> {
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let n = norm(&v);
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(Self(scale(&v, 1.0 / n)))
    }

    /// Point on the sphere at polar angle `theta` and azimuth `phi`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self([st * cp, st * sp, ct])
    }

    pub fn as_array(&self) -> &Vec3 {
        &self.0
    }

    pub fn neg(&self) -> Self {
        Self(scale(&self.0, -1.0))
    }

    /// Two unit vectors `(u, v)` such that `(u, v, self)` is a right-handed
    /// orthonormal frame. The helper axis is the coordinate axis least
    /// aligned with `self`.
    pub fn orthonormal_frame(&self) -> (UnitVector, UnitVector) {
        let w = &self.0;
        let abs = [w[0].abs(), w[1].abs(), w[2].abs()];
        let helper = if abs[0] <= abs[1] && abs[0] <= abs[2] {
            [1.0, 0.0, 0.0]
        } else if abs[1] <= abs[2] {
            [0.0, 1.0, 0.0]
        } else {
            [0.0, 0.0, 1.0]
        };
        let u = UnitVector::new(cross(&helper, w)).expect("helper axis is never parallel");
        let v = UnitVector(cross(w, &u.0));
        (u, v)
    }
}

impl TryFrom<Vec3> for UnitVector {
    type Error = Error;

    fn try_from(v: Vec3) -> Result<Self> {
        Self::new(v)
    }
}

impl From<UnitVector> for Vec3 {
    fn from(u: UnitVector) -> Vec3 {
        u.0
    }
}

impl std::ops::Deref for UnitVector {
    type Target = Vec3;

    fn deref(&self) -> &Vec3 {
        &self.0
    }
}
