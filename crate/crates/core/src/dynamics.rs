//! Rigid-body state and time integration of clumps.
//!
//! Translation uses velocity Verlet. Rotation uses a leap-frog scheme with
//! angular velocity stored at half steps, Euler's equations solved in the
//! world frame and an implicit mid-step angular velocity found by
//! fixed-point iteration.

use crate::boundary::PeriodicBox;
use crate::error::{Error, Result};
use crate::forge::ClumpTemplate;
use crate::math::{rotate_increment, Mat3, Vec3};

#[derive(Clone, Debug, PartialEq)]
pub struct ClumpInstance {
    pub template: usize,
    pub mass: f64,
    /// Body-frame principal moments, copied from the template.
    pub principal_moments: Vec3,
    pub position: Vec3,
    pub velocity: Vec3,
    /// Columns are the body axes in world coordinates.
    pub orientation: Mat3,
    /// World-frame angular velocity. Between steps of a running world this
    /// is the value half a step behind the positions.
    pub omega: Vec3,
    pub force: Vec3,
    pub torque: Vec3,
}

impl ClumpInstance {
    pub fn new(template_index: usize, template: &ClumpTemplate, position: Vec3, orientation: Mat3) -> Self {
        ClumpInstance {
            template: template_index,
            mass: template.mass,
            principal_moments: template.principal_moments,
            position,
            velocity: Vec3::ZERO,
            orientation,
            omega: Vec3::ZERO,
            force: Vec3::ZERO,
            torque: Vec3::ZERO,
        }
    }

    /// `Q · diag(I) · Qᵀ`.
    pub fn inertia_world(&self) -> Mat3 {
        let q = self.orientation;
        q * Mat3::diag(self.principal_moments) * q.transpose()
    }

    pub fn body_to_world(&self, offset: Vec3) -> Vec3 {
        self.orientation * offset
    }

    /// Velocity of the material point at world-frame lever `r` from the
    /// centre of mass.
    #[inline]
    pub fn point_velocity(&self, r: Vec3) -> Vec3 {
        self.velocity + self.omega.cross(r)
    }

    /// Adds `f` acting at lever `r` to the accumulated force and torque.
    #[inline]
    pub fn apply(&mut self, r: Vec3, f: Vec3) {
        self.force += f;
        self.torque += r.cross(f);
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorSettings {
    pub dt: f64,
    pub omega_iterations: usize,
    pub gravity: Vec3,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        IntegratorSettings { dt: 1e-4, omega_iterations: 3, gravity: Vec3::ZERO }
    }
}

impl IntegratorSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidInput(format!("dt must be positive, got {}", self.dt)));
        }
        if !(1..=10).contains(&self.omega_iterations) {
            return Err(Error::InvalidInput(format!(
                "omega iterations must be in 1..=10, got {}",
                self.omega_iterations
            )));
        }
        if !self.gravity.is_finite() {
            return Err(Error::InvalidInput("gravity must be finite".into()));
        }
        Ok(())
    }

    /// A fiftieth of the linear contact period of a pebble of mass `m_min`.
    pub fn recommended_dt(m_min: f64, kn: f64) -> f64 {
        std::f64::consts::PI * (m_min / kn).sqrt() / 50.0
    }
}

/// Sum of pebble forces plus gravity, and their torque about the centre of
/// mass. Levers use the minimum image when `boundary` is periodic.
pub fn aggregate_loads(
    com: Vec3,
    mass: f64,
    gravity: Vec3,
    loads: &[(Vec3, Vec3)],
    boundary: Option<&PeriodicBox>,
) -> (Vec3, Vec3) {
    let mut f = gravity * mass;
    let mut m = Vec3::ZERO;
    for &(point, force) in loads {
        let lever = match boundary {
            Some(b) => b.min_image(point - com),
            None => point - com,
        };
        f += force;
        m += lever.cross(force);
    }
    (f, m)
}

/// Angular acceleration from `M − W = I ω̇` with the full world-frame tensor.
///
/// `W` is assembled component-wise with `I_ij` standing for the products of
/// inertia, so that the tensor reads `[[I11, −I12, −I13], [−I21, I22, −I23],
/// [−I31, −I32, I33]]`.
pub fn solve_euler(inertia: &Mat3, omega: Vec3, torque: Vec3) -> Result<Vec3> {
    let t = inertia;
    let (i11, i22, i33) = (t[(0, 0)], t[(1, 1)], t[(2, 2)]);
    let (i12, i13, i23) = (-t[(0, 1)], -t[(0, 2)], -t[(1, 2)]);
    let (i21, i31, i32) = (-t[(1, 0)], -t[(2, 0)], -t[(2, 1)]);
    let [w1, w2, w3] = omega.to_array();
    let w = Vec3::new(
        (i33 - i22) * w2 * w3 + i23 * w3 * w3 - i32 * w2 * w2 - i31 * w1 * w2 + i21 * w1 * w3,
        (i11 - i33) * w3 * w1 + i31 * w1 * w1 - i13 * w3 * w3 - i12 * w2 * w3 + i32 * w2 * w1,
        (i22 - i11) * w1 * w2 + i12 * w2 * w2 - i21 * w1 * w1 - i23 * w3 * w1 + i13 * w3 * w2,
    );
    let scale = t.norm();
    if !(scale > 0.0) || t.determinant().abs() <= 1e-14 * scale * scale * scale {
        return Err(Error::SingularInertia);
    }
    t.solve(torque - w).ok_or(Error::SingularInertia)
}

/// Fixed-point estimate of the angular velocity half a step after the stored
/// one, and the angular acceleration of the last iteration.
fn mid_step(inertia: &Mat3, w0: Vec3, torque: Vec3, dt: f64, iterations: usize) -> Result<(Vec3, Vec3)> {
    let mut estimate = w0;
    let mut wdot = Vec3::ZERO;
    for _ in 0..iterations {
        wdot = solve_euler(inertia, estimate, torque)?;
        let w_new = w0 + wdot * dt;
        estimate = (w0 + w_new) * 0.5;
    }
    Ok((estimate, wdot))
}

/// Advances the half-step angular velocity by one step using the current
/// torque, then the orientation with the new angular velocity.
pub fn integrate_rotation(c: &mut ClumpInstance, dt: f64, iterations: usize) -> Result<()> {
    let (_, wdot) = mid_step(&c.inertia_world(), c.omega, c.torque, dt, iterations.max(1))?;
    c.omega += wdot * dt;
    c.orientation = rotate_increment(&c.orientation, c.omega, dt);
    Ok(())
}

/// Angular velocity at the current integer time, half a step ahead of the
/// stored value: the average of the stored value and its successor under the
/// current torque.
pub fn synchronized_omega(c: &ClumpInstance, dt: f64, iterations: usize) -> Result<Vec3> {
    Ok(mid_step(&c.inertia_world(), c.omega, c.torque, dt, iterations.max(1))?.0)
}

/// Converts an angular velocity given at the current time into the value
/// half a step earlier, which starts the leap-frog.
pub fn stagger_omega(c: &mut ClumpInstance, dt: f64) -> Result<()> {
    let wdot = solve_euler(&c.inertia_world(), c.omega, c.torque)?;
    c.omega -= wdot * (0.5 * dt);
    Ok(())
}

/// First half of velocity Verlet: half kick, then drift.
#[inline]
pub fn verlet_first_half(c: &mut ClumpInstance, dt: f64) {
    c.velocity += c.force * (0.5 * dt / c.mass);
    c.position += c.velocity * dt;
}

/// Second half kick with the force at the new positions.
#[inline]
pub fn verlet_second_half(c: &mut ClumpInstance, dt: f64) {
    c.velocity += c.force * (0.5 * dt / c.mass);
}

/// One full velocity-Verlet step for a body whose force depends only on its
/// own state. `c.force` must hold the force at the current state.
pub fn integrate_translation(c: &mut ClumpInstance, dt: f64, mut force: impl FnMut(&ClumpInstance) -> Vec3) {
    verlet_first_half(c, dt);
    c.force = force(c);
    verlet_second_half(c, dt);
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EnergyReport {
    pub time: f64,
    pub translational: f64,
    pub rotational: f64,
    pub gravitational: f64,
    pub elastic: f64,
}

impl EnergyReport {
    pub fn kinetic(&self) -> f64 {
        self.translational + self.rotational
    }

    pub fn total(&self) -> f64 {
        self.translational + self.rotational + self.gravitational + self.elastic
    }

    pub const CSV_HEADER: &'static str = "time,E_trans,E_rot,E_grav,E_elastic";

    pub fn csv_row(&self) -> String {
        format!(
            "{:e},{:e},{:e},{:e},{:e}",
            self.time, self.translational, self.rotational, self.gravitational, self.elastic
        )
    }
}

pub fn translational_energy(c: &ClumpInstance) -> f64 {
    0.5 * c.mass * c.velocity.norm_squared()
}

pub fn rotational_energy(c: &ClumpInstance, omega: Vec3) -> f64 {
    0.5 * omega.dot(c.inertia_world() * omega)
}

/// Potential energy `−M g·x`, zero at the origin.
pub fn gravitational_energy(c: &ClumpInstance, gravity: Vec3) -> f64 {
    0.0 - c.mass * gravity.dot(c.position)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::axis_angle;
    use proptest::prelude::*;

    fn body(moments: Vec3) -> ClumpInstance {
        ClumpInstance {
            template: 0,
            mass: 2.0,
            principal_moments: moments,
            position: Vec3::ZERO,
            velocity: Vec3::ZERO,
            orientation: Mat3::IDENTITY,
            omega: Vec3::ZERO,
            force: Vec3::ZERO,
            torque: Vec3::ZERO,
        }
    }

    #[test]
    fn euler_examples() {
        let s = Mat3::scalar(2.0);
        assert_eq!(solve_euler(&s, Vec3::new(1.0, -2.0, 3.0), Vec3::ZERO).unwrap(), Vec3::ZERO);
        let d = Mat3::diag(Vec3::new(1.0, 2.0, 3.0));
        assert_eq!(solve_euler(&d, Vec3::Z, Vec3::ZERO).unwrap(), Vec3::ZERO);
        let a = solve_euler(&d, Vec3::new(1.0, 1.0, 0.0), Vec3::ZERO).unwrap();
        assert!((a - Vec3::new(0.0, 0.0, -1.0 / 3.0)).norm() < 1e-15);
        assert!(matches!(solve_euler(&Mat3::diag(Vec3::new(1.0, 1.0, 0.0)), Vec3::X, Vec3::ZERO), Err(Error::SingularInertia)));
    }

    proptest! {
        #[test]
        fn euler_matches_gyroscopic_cross_product(
            a in 0.5f64..5.0, b in 0.5f64..5.0, c in 0.5f64..5.0,
            ax in -1.0f64..1.0, ay in -1.0f64..1.0, az in -1.0f64..1.0, ang in 0.0f64..6.0,
            w in prop::array::uniform3(-3.0f64..3.0), m in prop::array::uniform3(-3.0f64..3.0),
        ) {
            let axis = Vec3::new(ax, ay, az).normalized().unwrap_or(Vec3::Z);
            let r = axis_angle(axis, ang);
            let inertia = r * Mat3::diag(Vec3::new(a, b, c)) * r.transpose();
            let (w, m) = (Vec3::from_array(w), Vec3::from_array(m));
            let got = solve_euler(&inertia, w, m).unwrap();
            // I ω̇ = M − ω × (I ω)
            let residual = inertia * got + w.cross(inertia * w) - m;
            prop_assert!(residual.norm() < 1e-10 * (1.0 + m.norm() + w.norm_squared() * inertia.norm()));
        }
    }

    #[test]
    fn loads_and_levers() {
        let g = Vec3::new(0.0, 0.0, -9.81);
        let (f, m) = aggregate_loads(Vec3::new(1.0, 2.0, 3.0), 2.0, g, &[], None);
        assert_eq!(f, Vec3::new(0.0, 0.0, -19.62));
        assert_eq!(m, Vec3::ZERO);
        let (f, m) = aggregate_loads(Vec3::ZERO, 1.0, Vec3::ZERO, &[(Vec3::X, Vec3::Y)], None);
        assert_eq!(f, Vec3::Y);
        assert_eq!(m, Vec3::Z);
    }

    #[test]
    fn wrapped_lever_matches_unwrapped() {
        let b = PeriodicBox::new(Vec3::ZERO, Vec3::splat(10.0), [true; 3]);
        let com = Vec3::new(9.7, 5.0, 0.2);
        let point = Vec3::new(10.4, 5.3, -0.1);
        let f = Vec3::new(0.3, -1.2, 2.0);
        let (_, direct) = aggregate_loads(com, 1.0, Vec3::ZERO, &[(point, f)], None);
        let (_, wrapped) = aggregate_loads(com, 1.0, Vec3::ZERO, &[(b.wrap(point), f)], Some(&b));
        assert!((direct - wrapped).norm() < 1e-10);
    }

    #[test]
    fn free_flight_and_gravity() {
        let mut c = body(Vec3::splat(1.0));
        c.velocity = Vec3::new(1.0, 2.0, 0.0);
        for _ in 0..100 {
            integrate_translation(&mut c, 0.01, |_| Vec3::ZERO);
        }
        assert!((c.position - Vec3::new(1.0, 2.0, 0.0)).norm() < 1e-12);

        let g = Vec3::new(0.0, 0.0, -9.81);
        let mut c = body(Vec3::splat(1.0));
        c.force = g * c.mass;
        let dt = 1e-3;
        for _ in 0..1000 {
            integrate_translation(&mut c, dt, |b| g * b.mass);
        }
        let expect = 0.5 * -9.81 * 1.0;
        assert!((c.position.z - expect).abs() < 1e-9 * expect.abs());
    }

    #[test]
    fn spherical_body_spins_uniformly() {
        let mut c = body(Vec3::splat(0.4));
        c.omega = Vec3::new(0.0, 0.0, 2.0);
        let dt = 1e-3;
        for _ in 0..1000 {
            integrate_rotation(&mut c, dt, 3).unwrap();
        }
        assert_eq!(c.omega, Vec3::new(0.0, 0.0, 2.0));
        let expect = axis_angle(Vec3::Z, 2.0);
        assert!((c.orientation - expect).norm() < 1e-9);
    }

    /// Body-frame angular velocity of a torque-free symmetric top precesses
    /// at `(I3 − I1)/I1 · ω3`.
    #[test]
    fn symmetric_top_precession() {
        let (i1, i3) = (2.0, 1.0);
        let mut c = body(Vec3::new(i1, i1, i3));
        let w_body = Vec3::new(0.3, 0.0, 1.5);
        c.orientation = axis_angle(Vec3::new(1.0, 2.0, 0.5).normalized().unwrap(), 0.7);
        c.omega = c.orientation * w_body;
        let rate = (i3 - i1) / i1 * w_body.z;
        let period = 2.0 * std::f64::consts::PI / rate.abs();
        let dt = period / 2000.0;
        stagger_omega(&mut c, dt).unwrap();
        let mut angle = 0.0;
        let mut last = w_body.y.atan2(w_body.x);
        let steps = 20_000;
        for _ in 0..steps {
            integrate_rotation(&mut c, dt, 3).unwrap();
            let w = synchronized_omega(&c, dt, 3).unwrap();
            let wb = c.orientation.transpose() * w;
            let a = wb.y.atan2(wb.x);
            let mut d = a - last;
            d -= 2.0 * std::f64::consts::PI * (d / (2.0 * std::f64::consts::PI)).round();
            angle += d;
            last = a;
        }
        let measured = angle / (steps as f64 * dt);
        assert!((measured / rate - 1.0).abs() < 5e-3, "measured {measured}, expected {rate}");
    }

    #[test]
    fn angular_momentum_conserved_torque_free() {
        let mut c = body(Vec3::new(3.0, 2.0, 1.0));
        c.orientation = axis_angle(Vec3::new(0.2, -1.0, 0.4).normalized().unwrap(), 1.1);
        c.omega = Vec3::new(0.5, 1.0, -0.7);
        let l0 = c.inertia_world() * c.omega;
        let dt = 1e-3;
        stagger_omega(&mut c, dt).unwrap();
        for _ in 0..100_000 {
            integrate_rotation(&mut c, dt, 3).unwrap();
        }
        let l = c.inertia_world() * synchronized_omega(&c, dt, 3).unwrap();
        assert!((l - l0).norm() / l0.norm() < 1e-3);
        assert!(c.orientation.orthonormality_error() < 1e-8);
    }

    #[test]
    fn fixed_point_iterations_converge() {
        let inertia = Mat3::diag(Vec3::new(3.0, 2.0, 1.0));
        let w0 = Vec3::new(0.4, 1.0, 0.1);
        let dt = 1e-3;
        let (a, _) = mid_step(&inertia, w0, Vec3::ZERO, dt, 5).unwrap();
        let (b, _) = mid_step(&inertia, w0, Vec3::ZERO, dt, 50).unwrap();
        assert!((a - b).norm() / b.norm() < 1e-6);
        let mut prev = w0;
        let mut last_change = f64::INFINITY;
        for n in 1..6 {
            let (e, _) = mid_step(&inertia, w0, Vec3::ZERO, dt, n).unwrap();
            let change = (e - prev).norm();
            if n > 1 {
                assert!(change < 0.1 * last_change || change < 1e-15);
            }
            last_change = change;
            prev = e;
        }
    }

    #[test]
    fn energy_terms() {
        let mut c = body(Vec3::new(3.0, 2.0, 1.0));
        assert_eq!(translational_energy(&c), 0.0);
        assert_eq!(rotational_energy(&c, c.omega), 0.0);
        assert_eq!(gravitational_energy(&c, Vec3::new(0.0, 0.0, -9.81)), 0.0);
        c.velocity = Vec3::X;
        assert_eq!(translational_energy(&c), 1.0);
        c.position = Vec3::new(0.0, 0.0, 2.0);
        assert!((gravitational_energy(&c, Vec3::new(0.0, 0.0, -9.81)) - 39.24).abs() < 1e-12);
        assert_eq!(rotational_energy(&c, Vec3::new(0.0, 0.0, 2.0)), 2.0);
    }
}
