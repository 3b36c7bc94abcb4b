//! Two-tier hexagonal layout around a serving base station at the origin.
//!
//! Sites sit on a triangular lattice with inter-site distance `2R`, where `R`
//! is the cell inradius. The reuse-1 interferers are the 18 sites of the first
//! two tiers. The reuse-3 co-channel set is the six second-tier sites at
//! distance `2√3·R`, which is the only 60°-symmetric reuse-3 set inside two
//! tiers. Interference from beyond the second tier is not modelled.

use serde::{Deserialize, Serialize};

use crate::error::{FfrError, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point<R> {
    pub x: R,
    pub y: R,
}

impl<R: Real> Point<R> {
    pub fn new(x: R, y: R) -> Self {
        Self { x, y }
    }

    pub fn norm(&self) -> R {
        self.x.hypot(self.y)
    }

    pub fn distance(&self, other: &Point<R>) -> R {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn angle(&self) -> R {
        self.y.atan2(self.x)
    }
}

/// Which co-channel interferer set a link sees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InterfererSet {
    /// Full reuse: all 18 two-tier neighbours.
    Fr1,
    /// Reuse 1/3: the six co-channel second-tier sites.
    Fr3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkLayout<R> {
    cell_radius: R,
    fr1: Vec<Point<R>>,
    fr3: Vec<Point<R>>,
}

/// Symmetry sector of the layout.
pub fn sector_angle<R: Real>() -> R {
    R::FRAC_PI_3()
}

/// Builds the two-tier layout for cell inradius `cell_radius` (meters).
pub fn build_layout<R: Real>(cell_radius: R) -> Result<NetworkLayout<R>> {
    NetworkLayout::new(cell_radius)
}

impl<R: Real> NetworkLayout<R> {
    pub fn new(cell_radius: R) -> Result<Self> {
        if !(cell_radius > R::zero() && cell_radius.is_finite()) {
            return Err(FfrError::param(format!("cell radius must be positive and finite, got {cell_radius}")));
        }
        let two = R::lit(2.0);
        let sqrt3 = R::lit(3.0).sqrt();
        let u = Point::new(two * cell_radius, R::zero());
        let v = Point::new(cell_radius, sqrt3 * cell_radius);
        // Work on the unit lattice to classify tiers exactly, then scale.
        let mut sites: Vec<(i64, f64, Point<R>)> = Vec::new();
        for i in -4i64..=4 {
            for j in -4i64..=4 {
                // squared distance in units of R²: |2i + j|² + 3 j²
                let sq = (2 * i + j).pow(2) + 3 * j * j;
                if sq == 0 || sq > 16 {
                    continue;
                }
                let (fi, fj) = (R::lit(i as f64), R::lit(j as f64));
                let p = Point::new(fi * u.x + fj * v.x, fi * u.y + fj * v.y);
                // order: by ring, then counter-clockwise from the +x axis
                let ccw = (3f64.sqrt() * j as f64).atan2(2.0 * i as f64 + j as f64);
                let ccw = if ccw < -1e-12 { ccw + std::f64::consts::TAU } else { ccw.max(0.0) };
                sites.push((sq, ccw, p));
            }
        }
        sites.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.partial_cmp(&b.1).unwrap()));
        let fr3 = sites.iter().filter(|s| s.0 == 12).map(|s| s.2).collect::<Vec<_>>();
        let fr1 = sites.into_iter().map(|s| s.2).collect::<Vec<_>>();
        debug_assert_eq!(fr1.len(), 18);
        debug_assert_eq!(fr3.len(), 6);
        Ok(Self { cell_radius, fr1, fr3 })
    }

    /// Layout with explicit interferer sets, for reduced test geometries.
    pub fn custom(cell_radius: R, fr1: Vec<Point<R>>, fr3: Vec<Point<R>>) -> Result<Self> {
        if !(cell_radius > R::zero() && cell_radius.is_finite()) {
            return Err(FfrError::param(format!("cell radius must be positive and finite, got {cell_radius}")));
        }
        for p in fr1.iter().chain(&fr3) {
            if !(p.norm() > cell_radius) {
                return Err(FfrError::param("interfering sites must lie outside the serving cell"));
            }
        }
        Ok(Self { cell_radius, fr1, fr3 })
    }

    pub fn cell_radius(&self) -> R {
        self.cell_radius
    }

    pub fn interferers(&self, set: InterfererSet) -> &[Point<R>] {
        match set {
            InterfererSet::Fr1 => &self.fr1,
            InterfererSet::Fr3 => &self.fr3,
        }
    }

    /// Validated user position inside this cell.
    pub fn user(&self, r: R, theta: R) -> Result<UserPosition<R>> {
        let user = UserPosition::new(r, theta)?;
        if r > self.cell_radius * (R::one() + R::epsilon() * R::lit(16.0)) {
            return Err(FfrError::param(format!(
                "user radius {r} exceeds cell radius {}",
                self.cell_radius
            )));
        }
        Ok(user)
    }

    /// Whether a point falls inside the hexagonal serving cell.
    pub fn in_hexagon(&self, p: &Point<R>) -> bool {
        (0..6).all(|k| {
            let a = sector_angle::<R>() * R::lit(k as f64);
            p.x * a.cos() + p.y * a.sin() <= self.cell_radius
        })
    }
}

/// Polar position of the tagged user relative to its serving site.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UserPosition<R> {
    r: R,
    theta: R,
}

impl<R: Real> UserPosition<R> {
    /// `theta` is wrapped into `[0, 2π)`.
    pub fn new(r: R, theta: R) -> Result<Self> {
        if !(r >= R::zero() && r.is_finite()) {
            return Err(FfrError::param(format!("user radius must be finite and non-negative, got {r}")));
        }
        if !theta.is_finite() {
            return Err(FfrError::param("user angle must be finite"));
        }
        let tau = R::TAU();
        let mut theta = theta % tau;
        if theta < R::zero() {
            theta = theta + tau;
        }
        if theta >= tau {
            theta = R::zero();
        }
        Ok(Self { r, theta })
    }

    pub fn r(&self) -> R {
        self.r
    }

    pub fn theta(&self) -> R {
        self.theta
    }

    pub fn cartesian(&self) -> Point<R> {
        Point::new(self.r * self.theta.cos(), self.r * self.theta.sin())
    }
}

/// Euclidean distances from the user to every site of `set`, in layout order.
pub fn interferer_distances<R: Real>(layout: &NetworkLayout<R>, user: &UserPosition<R>, set: InterfererSet) -> Vec<R> {
    let u = user.cartesian();
    layout.interferers(set).iter().map(|p| p.distance(&u)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn unit_layout_rings() {
        let layout = build_layout(1.0_f64).unwrap();
        let origin = UserPosition::new(0.0, 0.0).unwrap();
        let d = sorted(interferer_distances(&layout, &origin, InterfererSet::Fr1));
        let s3 = 2.0 * 3f64.sqrt();
        let want: Vec<f64> = [2.0; 6].iter().chain(&[s3; 6]).chain(&[4.0; 6]).copied().collect();
        for (a, b) in d.iter().zip(&want) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        let d3 = interferer_distances(&layout, &origin, InterfererSet::Fr3);
        assert_eq!(d3.len(), 6);
        assert!(d3.iter().all(|x| (x - s3).abs() < 1e-12));
    }

    #[test]
    fn fr3_is_subset_of_fr1() {
        let layout = build_layout(3.0_f64).unwrap();
        for p in layout.interferers(InterfererSet::Fr3) {
            assert!(layout.interferers(InterfererSet::Fr1).iter().any(|q| q.distance(p) < 1e-12));
        }
    }

    #[test]
    fn homogeneous_in_radius() {
        let a = build_layout(1.0_f64).unwrap();
        let b = build_layout(500.0_f64).unwrap();
        let ua = UserPosition::new(0.4, 1.1).unwrap();
        let ub = UserPosition::new(200.0, 1.1).unwrap();
        let da = interferer_distances(&a, &ua, InterfererSet::Fr1);
        let db = interferer_distances(&b, &ub, InterfererSet::Fr1);
        for (x, y) in da.iter().zip(&db) {
            assert!((500.0 * x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn collinear_edge_user_is_one_radius_from_first_tier() {
        let layout = build_layout(1.0_f64).unwrap();
        // first-tier sites are at multiples of 60°, starting at 0
        let user = layout.user(1.0, 0.0).unwrap();
        let d = interferer_distances(&layout, &user, InterfererSet::Fr1);
        let min = d.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!((min - 1.0).abs() < 1e-12);
    }

    #[test]
    fn matches_direct_coordinates() {
        let layout = build_layout(1.0_f64).unwrap();
        let theta = std::f64::consts::PI / 7.0;
        let user = layout.user(0.5, theta).unwrap();
        let (ux, uy) = (0.5 * theta.cos(), 0.5 * theta.sin());
        // independent enumeration: ring radius and angular offsets
        let s3 = 3f64.sqrt();
        let mut sites = Vec::new();
        for k in 0..6 {
            let a = k as f64 * std::f64::consts::FRAC_PI_3;
            sites.push((2.0 * a.cos(), 2.0 * a.sin()));
            sites.push((2.0 * s3 * (a + std::f64::consts::FRAC_PI_6).cos(), 2.0 * s3 * (a + std::f64::consts::FRAC_PI_6).sin()));
            sites.push((4.0 * a.cos(), 4.0 * a.sin()));
        }
        let want = sorted(sites.iter().map(|(x, y)| ((x - ux).powi(2) + (y - uy).powi(2)).sqrt()).collect());
        let got = sorted(interferer_distances(&layout, &user, InterfererSet::Fr1));
        assert_eq!(got.len(), 18);
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(build_layout(0.0_f64).is_err());
        assert!(build_layout(-2.0_f64).is_err());
        assert!(build_layout(f64::NAN).is_err());
        let layout = build_layout(1.0_f64).unwrap();
        assert!(layout.user(1.5, 0.0).is_err());
        assert!(UserPosition::new(-0.1_f64, 0.0).is_err());
    }

    #[test]
    fn angle_wraps_into_range() {
        let u = UserPosition::new(1.0_f64, -std::f64::consts::FRAC_PI_2).unwrap();
        assert!((u.theta() - 1.5 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn hexagon_membership() {
        let layout = build_layout(1.0_f64).unwrap();
        assert!(layout.in_hexagon(&Point::new(0.99, 0.0)));
        assert!(!layout.in_hexagon(&Point::new(1.01, 0.0)));
        // corner direction reaches 2/√3
        let c = 2.0 / 3f64.sqrt() - 1e-9;
        let a = std::f64::consts::FRAC_PI_6;
        assert!(layout.in_hexagon(&Point::new(c * a.cos(), c * a.sin())));
    }

    #[test]
    fn single_precision_layout() {
        let layout = build_layout(1.0_f32).unwrap();
        assert_eq!(layout.interferers(InterfererSet::Fr1).len(), 18);
    }
}
