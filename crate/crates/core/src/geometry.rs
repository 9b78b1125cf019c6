//! Approach regions and boxes in the unit disc: cones `Γ_M(ξ)`, their partitions into
//! deeper cones, Carleson squares and pseudohyperbolic discs.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::weights::RadialWeight;

/// Quotient distance between two angles, in `[0, π]`.
pub fn angle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// `Γ_M(ξ) = {z : |arg z − arg ξ| < M(|ξ| − |z|)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cone {
    vertex: Complex64,
    opening: f64,
}

impl Cone {
    pub fn new(vertex: Complex64, opening: f64) -> Result<Cone> {
        if vertex.norm() == 0.0 || vertex.norm() > 1.0 {
            return invalid("cone vertex must satisfy 0 < |ξ| <= 1");
        }
        if !(opening > 0.0 && opening.is_finite()) {
            return invalid("cone opening must be positive");
        }
        Ok(Cone { vertex, opening })
    }

    pub fn vertex(&self) -> Complex64 {
        self.vertex
    }

    pub fn opening(&self) -> f64 {
        self.opening
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let slack = self.opening * (self.vertex.norm() - z.norm());
        if slack <= 0.0 {
            return false;
        }
        if z.norm() == 0.0 {
            return true;
        }
        angle_dist(z.arg(), self.vertex.arg()) < slack
    }
}

/// `|{ξ ∈ 𝕋 : z ∈ Γ_M(ξ)}| = 2M(1 − |z|)`, capped at the full circle.
pub fn boundary_arc_length(z: Complex64, m: f64) -> f64 {
    (2.0 * m * (1.0 - z.norm())).min(2.0 * PI)
}

/// Cone `Γ_M(ξ)` split into cells `E_{j,k}` generated by the vertices
/// `ξ_{j,k} = ξ (n−j)/n · e^{iM|ξ|k/n}`, `0 ≤ j ≤ n−1`, `|k| ≤ j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConePartition {
    cone: Cone,
    n: usize,
}

impl ConePartition {
    pub fn new(vertex: Complex64, opening: f64, n: usize) -> Result<ConePartition> {
        if n == 0 {
            return invalid("partition depth must be at least 1");
        }
        Ok(ConePartition { cone: Cone::new(vertex, opening)?, n })
    }

    pub fn depth(&self) -> usize {
        self.n
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    /// Vertex `ξ_{j,k}`.
    pub fn vertex(&self, j: usize, k: i64) -> Complex64 {
        let xi = self.cone.vertex;
        let n = self.n as f64;
        xi * ((n - j as f64) / n) * Complex64::from_polar(1.0, self.cone.opening * xi.norm() * k as f64 / n)
    }

    fn sub_cone(&self, j: usize, k: i64) -> Cone {
        Cone { vertex: self.vertex(j, k), opening: self.cone.opening }
    }

    /// Cell `(j, k)` containing `z`, or `None` outside `Γ_M(ξ)`.
    ///
    /// `j` is the deepest level whose cones contain `z`. Within a level, indices are
    /// swept in the order `0, 1, −1, 2, −2, …` and the first cone containing `z` wins,
    /// which makes the cells pairwise disjoint.
    pub fn locate(&self, z: Complex64) -> Option<(usize, i64)> {
        if !self.cone.contains(z) {
            return None;
        }
        for j in (0..self.n).rev() {
            let j_i = j as i64;
            for step in 0..=(2 * j_i) {
                let k = if step == 0 { 0 } else if step % 2 == 1 { (step + 1) / 2 } else { -(step / 2) };
                if self.sub_cone(j, k).contains(z) {
                    return Some((j, k));
                }
            }
        }
        None
    }
}

/// Free-function form of [`ConePartition::locate`].
pub fn partition_locate(p: &ConePartition, z: Complex64) -> Option<(usize, i64)> {
    p.locate(z)
}

/// `S(a) = {z : |z| ≥ |a|, |arg(a e^{−i arg z})| ≤ (1−|a|)/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarlesonSquare {
    pub a: Complex64,
}

impl CarlesonSquare {
    pub fn new(a: Complex64) -> Result<CarlesonSquare> {
        if a.norm() >= 1.0 {
            return invalid("Carleson square needs |a| < 1");
        }
        Ok(CarlesonSquare { a })
    }

    /// Half-width of the boundary arc `I_a`.
    pub fn half_width(&self) -> f64 {
        0.5 * (1.0 - self.a.norm())
    }

    pub fn contains(&self, z: Complex64) -> bool {
        if z.norm() < self.a.norm() || z.norm() >= 1.0 {
            return false;
        }
        if self.a.norm() == 0.0 {
            // arg 0 is the convention for a = 0
            return angle_dist(z.arg(), 0.0) <= self.half_width();
        }
        angle_dist(z.arg(), self.a.arg()) <= self.half_width()
    }

    /// `η(S) = ∫_S η dA` with `dA = dx dy/π`.
    pub fn measure(&self, eta: &RadialWeight) -> f64 {
        let inner = eta.integrate_tail(&|t| t, self.a.norm());
        2.0 * self.half_width() * inner / PI
    }
}

pub fn carleson_squares_containing(z: Complex64, grid: &[Complex64]) -> Vec<CarlesonSquare> {
    grid.iter()
        .filter_map(|a| CarlesonSquare::new(*a).ok())
        .filter(|s| s.contains(z))
        .collect()
}

/// Euclidean centre and radius of the pseudohyperbolic disc `Δ(z, r)`.
pub fn pseudo_disc_params(z: Complex64, r: f64) -> Result<(Complex64, f64)> {
    if z.norm() >= 1.0 || !(0.0..1.0).contains(&r) {
        return invalid("pseudo-disc needs |z| < 1 and 0 <= r < 1");
    }
    let s = z.norm_sqr();
    let den = 1.0 - s * r * r;
    Ok((z * ((1.0 - r * r) / den), (1.0 - s) * r / den))
}

/// Pseudohyperbolic distance `|φ_z(w)| = |(z − w)/(1 − z̄w)|`.
pub fn pseudo_distance(z: Complex64, w: Complex64) -> f64 {
    ((z - w) / (Complex64::new(1.0, 0.0) - z.conj() * w)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cone_examples() {
        let g = Cone::new(c(1.0, 0.0), 1.0).unwrap();
        assert!(g.contains(c(0.5, 0.0)));
        assert!(!g.contains(Complex64::from_polar(0.5, 0.6)));
        assert!(g.contains(c(0.0, 0.0)));
        assert!((boundary_arc_length(c(0.5, 0.0), 1.0) - 1.0).abs() < 1e-15);
        assert!((boundary_arc_length(c(0.9, 0.0), 2.0) - 0.4).abs() < 1e-12);
    }

    #[test]
    fn partition_examples() {
        let p = ConePartition::new(c(1.0, 0.0), 1.0, 4).unwrap();
        assert_eq!(p.locate(c(0.1, 0.0)), Some((3, 0)));
        let p1 = ConePartition::new(c(1.0, 0.0), 1.0, 1).unwrap();
        assert_eq!(p1.locate(c(0.3, 0.1)), Some((0, 0)));
        assert_eq!(p.locate(c(-0.5, 0.0)), None);
    }

    #[test]
    fn carleson_examples() {
        let s = CarlesonSquare::new(c(0.5, 0.0)).unwrap();
        assert!(s.contains(c(0.75, 0.0)));
        assert!(!s.contains(c(0.25, 0.0)));
        assert!(!s.contains(Complex64::from_polar(0.75, 0.3)));
    }

    #[test]
    fn pseudo_disc_example() {
        let (cz, rad) = pseudo_disc_params(c(0.5, 0.0), 0.5).unwrap();
        assert!((cz - c(0.4, 0.0)).norm() < 1e-15);
        assert!((rad - 0.4).abs() < 1e-15);
    }
}
