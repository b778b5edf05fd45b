// scratch probe, not part of the deliverable
include!("../tests/support/mod.rs");

use dirac_ssf::distortion::{DistortionParam, ScalingSpec};
use dirac_ssf::fields::{FieldConfig, RadialProfile};
use dirac_ssf::radial_model::{assemble_channel_operator, Method, RadialChannel, RadialGrid};
use dirac_ssf::resonance_solver::solve_spectrum;

fn main() {
    let phys = PhysicalConfig::natural(1.0);
    // (c) scan for narrow kappa=-1 resonances near the upper edge from
    // strong barriers.
    for depth in [-4.0f64, -4.5, -5.0, -5.5, -6.0, -7.0, -8.0] {
        let upper = jost_resonances(-1, depth, 1.0, &phys, (1.0001, 2.0), (-0.3, -1e-6));
        println!("depth={depth}: upper={upper:?}");
    }
    // (a,b) theta stability and box dependence of the lower-edge mode.
    let fields = FieldConfig::spherical(
        RadialProfile::SquareWell {
            depth: -2.0,
            radius: 1.0,
        },
        1.0,
    );
    let scaling = ScalingSpec::new(3.0, 6.0).unwrap();
    let oracle = c(-1.1265546179220036, -0.03977403814583593);
    for (theta_im, r_max) in [(0.2, 12.0), (0.3, 12.0), (0.2, 24.0), (0.3, 24.0)] {
        let n = (960.0 * r_max / 12.0) as usize;
        let op = assemble_channel_operator(
            RadialChannel::new(-1),
            &Method::ComplexScaling {
                param: DistortionParam::new(c(0.0, theta_im), 0.5).unwrap(),
                spec: scaling,
            },
            RadialGrid { r_max, n },
            &fields,
            &phys,
        )
        .unwrap();
        let eigs = solve_spectrum(&op).unwrap();
        let near: Vec<_> = eigs
            .iter()
            .filter(|z| (z.re - oracle.re).abs() < 0.05 && z.im.abs() < 0.1)
            .collect();
        println!("theta={theta_im}i r_max={r_max}: {near:?}");
    }
}
