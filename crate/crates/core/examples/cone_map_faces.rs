//! The cone map sends each face of the simplex into the matching partial
//! intersection. Samples every face of a generated instance and reports the
//! worst violation of the bodies the face must avoid.
//!
//! cargo run --example cone_map_faces

use geohelly::simplex::BarycentricPoint;
use geohelly::solver::{generate_instance, subsets};
use geohelly::{build_cone_map, SpaceModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> geohelly::Result<()> {
    let plane = SpaceModel::euclidean(2)?;
    let problem = generate_instance(7, &plane, 4)?;
    let cm = build_cone_map(&problem.space, &problem.bodies, &problem.witnesses, 1e-9)?;
    println!("continuity ratio estimate: {:.3}", cm.continuity_probe(500, 1e-3, 1)?);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for size in 1..4 {
        for face in subsets(4, size) {
            let mut worst: f64 = 0.0;
            for _ in 0..200 {
                let mut z = vec![0.0; 4];
                for &i in &face {
                    z[i] = rng.gen::<f64>() + 1e-9;
                }
                let s: f64 = z.iter().sum();
                z.iter_mut().for_each(|c| *c /= s);
                let x = cm.evaluate(&BarycentricPoint::new(z)?)?;
                for j in (0..4).filter(|j| !face.contains(j)) {
                    worst = worst.max(plane.violation(&problem.bodies[j], &x));
                }
            }
            println!("face {face:?}: max violation {worst:e}");
        }
    }
    Ok(())
}
