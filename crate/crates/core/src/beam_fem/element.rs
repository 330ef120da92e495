use nalgebra::Matrix4;

use crate::{OmaError, Result};

/// Stiffness and consistent mass of a two-node Hermite-cubic bending element.
///
/// DOF order per element: `[v1, theta1, v2, theta2]`.
pub fn element_matrices(
    elastic_modulus: f64,
    second_moment: f64,
    mass_density: f64,
    area: f64,
    length: f64,
) -> Result<(Matrix4<f64>, Matrix4<f64>)> {
    let args = [
        ("elastic modulus", elastic_modulus),
        ("second moment", second_moment),
        ("mass density", mass_density),
        ("area", area),
        ("element length", length),
    ];
    for (name, value) in args {
        if !(value > 0.0 && value.is_finite()) {
            return Err(OmaError::InvalidParameter(format!("{name} must be positive, got {value}")));
        }
    }

    let l = length;
    let l2 = l * l;
    let k = elastic_modulus * second_moment / (l2 * l);
    #[rustfmt::skip]
    let ke = Matrix4::new(
        12.0,      6.0 * l,  -12.0,      6.0 * l,
        6.0 * l,   4.0 * l2, -6.0 * l,   2.0 * l2,
        -12.0,     -6.0 * l, 12.0,       -6.0 * l,
        6.0 * l,   2.0 * l2, -6.0 * l,   4.0 * l2,
    ) * k;

    let m = mass_density * area * l / 420.0;
    #[rustfmt::skip]
    let me = Matrix4::new(
        156.0,      22.0 * l,  54.0,       -13.0 * l,
        22.0 * l,   4.0 * l2,  13.0 * l,   -3.0 * l2,
        54.0,       13.0 * l,  156.0,      -22.0 * l,
        -13.0 * l,  -3.0 * l2, -22.0 * l,  4.0 * l2,
    ) * m;

    Ok((ke, me))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Vector4;

    const E: f64 = 2.0e11;
    const RHO: f64 = 7850.0;
    const A: f64 = 1.0e-4;
    const I: f64 = 1.0e-8 / 12.0;
    const LE: f64 = 0.1;

    #[test]
    fn rigid_translation_is_force_free() {
        let (ke, _) = element_matrices(E, I, RHO, A, LE).unwrap();
        let f = ke * Vector4::new(1.0, 0.0, 1.0, 0.0);
        assert!(f.norm() < 1e-6 * ke.norm());
    }

    #[test]
    fn rigid_rotation_is_force_free() {
        // v = x, theta = 1 across the element
        let (ke, _) = element_matrices(E, I, RHO, A, LE).unwrap();
        let f = ke * Vector4::new(0.0, 1.0, LE, 1.0);
        assert!(f.norm() < 1e-9 * ke.norm());
    }

    #[test]
    fn unit_translation_carries_element_mass() {
        let (_, me) = element_matrices(E, I, RHO, A, LE).unwrap();
        let u = Vector4::new(1.0, 0.0, 1.0, 0.0);
        let mass = u.dot(&(me * u));
        assert!((mass - 0.0785).abs() < 1e-15);
    }

    #[test]
    fn leading_stiffness_entry() {
        // 12 EI / Le^3 with EI = 166.667 N m^2
        let (ke, _) = element_matrices(E, I, RHO, A, LE).unwrap();
        assert!((ke[(0, 0)] - 2.0e6).abs() < 1e-6);
    }

    #[test]
    fn symmetry_rank_and_definiteness() {
        let (ke, me) = element_matrices(E, I, RHO, A, LE).unwrap();
        assert_eq!(ke, ke.transpose());
        assert_eq!(me, me.transpose());
        let ek = ke.symmetric_eigenvalues();
        let scale = ek.amax();
        let nonzero = ek.iter().filter(|v| v.abs() > 1e-10 * scale).count();
        assert_eq!(nonzero, 2);
        assert!(ek.iter().all(|v| *v > -1e-10 * scale));
        assert!(me.symmetric_eigenvalues().iter().all(|v| *v > 0.0));
    }

    #[test]
    fn non_positive_arguments_rejected() {
        assert!(element_matrices(0.0, I, RHO, A, LE).is_err());
        assert!(element_matrices(E, -I, RHO, A, LE).is_err());
        assert!(element_matrices(E, I, RHO, A, 0.0).is_err());
        assert!(element_matrices(E, I, f64::NAN, A, LE).is_err());
    }
}
