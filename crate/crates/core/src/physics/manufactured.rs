//! Closed-form manufactured solution on (π/2, 3π/2)³.
//!
//! A = (sin x cos y cos z, −2 cos x sin y cos z, cos x cos y sin z) is
//! divergence free with A×n = 0 on the boundary, φ = cos x cos y cos z
//! vanishes there. Both are eigenfunctions of the Laplacian with eigenvalue
//! −3, so curl curl A = 3A and Δφ = −3φ.

use std::f64::consts::PI;

use crate::assembly::Material;
use crate::{Complex64, Error, Result, I};

pub const DOMAIN: [f64; 2] = [0.5 * PI, 1.5 * PI];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManufacturedCase {
    pub material: Material,
}

struct Trig {
    sx: f64,
    cx: f64,
    sy: f64,
    cy: f64,
    sz: f64,
    cz: f64,
}

fn trig(p: [f64; 3]) -> Trig {
    let (sx, cx) = p[0].sin_cos();
    let (sy, cy) = p[1].sin_cos();
    let (sz, cz) = p[2].sin_cos();
    Trig { sx, cx, sy, cy, sz, cz }
}

impl ManufacturedCase {
    /// ν = 1/μ₀, ε = ε₀ and the given conductivity.
    pub fn vacuum(sigma: f64) -> Self {
        Self {
            material: Material::relative(sigma, 1.0, 1.0),
        }
    }

    pub fn extents() -> [[f64; 2]; 3] {
        [DOMAIN; 3]
    }

    pub fn vector_potential(&self, p: [f64; 3]) -> [f64; 3] {
        let t = trig(p);
        [t.sx * t.cy * t.cz, -2.0 * t.cx * t.sy * t.cz, t.cx * t.cy * t.sz]
    }

    pub fn curl_vector_potential(&self, p: [f64; 3]) -> [f64; 3] {
        let t = trig(p);
        [-3.0 * t.cx * t.sy * t.sz, 0.0, 3.0 * t.sx * t.sy * t.cz]
    }

    pub fn curl_curl_vector_potential(&self, p: [f64; 3]) -> [f64; 3] {
        self.vector_potential(p).map(|v| 3.0 * v)
    }

    pub fn div_vector_potential(&self, p: [f64; 3]) -> f64 {
        let t = trig(p);
        t.cx * t.cy * t.cz - 2.0 * t.cx * t.cy * t.cz + t.cx * t.cy * t.cz
    }

    pub fn scalar_potential(&self, p: [f64; 3]) -> f64 {
        let t = trig(p);
        t.cx * t.cy * t.cz
    }

    pub fn grad_scalar_potential(&self, p: [f64; 3]) -> [f64; 3] {
        let t = trig(p);
        [-t.sx * t.cy * t.cz, -t.cx * t.sy * t.cz, -t.cx * t.cy * t.sz]
    }

    pub fn laplace_scalar_potential(&self, p: [f64; 3]) -> f64 {
        -3.0 * self.scalar_potential(p)
    }

    /// J_s = curl(ν curl A) + iωκA + κ grad φ.
    pub fn current_source(&self, p: [f64; 3], omega: f64) -> [Complex64; 3] {
        let m = &self.material;
        let kappa = m.kappa(omega);
        let a = self.vector_potential(p);
        let cc = self.curl_curl_vector_potential(p);
        let g = self.grad_scalar_potential(p);
        [0, 1, 2].map(|d| m.nu * cc[d] + I * omega * kappa * a[d] + kappa * g[d])
    }

    /// ρ_s = −div(κ grad φ)/(iω) = 3(σ/(iω) + ε)φ; undefined at ω = 0 in a conductor.
    pub fn charge_density(&self, p: [f64; 3], omega: f64) -> Result<Complex64> {
        Ok(self.charge_factor(omega)? * (-self.laplace_scalar_potential(p)))
    }

    /// Source displacement D_e^s = (κ/(iω)) grad φ, whose divergence is −ρ_s.
    pub fn displacement_source(&self, p: [f64; 3], omega: f64) -> Result<[Complex64; 3]> {
        let f = self.charge_factor(omega)?;
        Ok(self.grad_scalar_potential(p).map(|g| f * g))
    }

    /// κ/(iω) = ε + σ/(iω).
    fn charge_factor(&self, omega: f64) -> Result<Complex64> {
        let m = &self.material;
        if m.sigma == 0.0 {
            Ok(Complex64::new(m.epsilon, 0.0))
        } else if omega == 0.0 {
            Err(Error::UndefinedSource)
        } else {
            Ok(Complex64::new(m.epsilon, -m.sigma / omega))
        }
    }

    pub fn sources(&self, p: [f64; 3], omega: f64) -> Result<([Complex64; 3], Complex64)> {
        Ok((self.current_source(p, omega), self.charge_density(p, omega)?))
    }
}
