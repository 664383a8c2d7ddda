//! A discrete KKM witness: three closed sets covering the triangle, each
//! avoiding the opposite edge, share a grid cell.
//!
//! cargo run --example kkm_covering

use geohelly::simplex::{kkm_witness, GridSpec};

fn main() -> geohelly::Result<()> {
    for res in [4, 8, 16, 32] {
        let spec = GridSpec::new(2, res)?;
        // G_i = { z : z_i >= 0.3 } misses the face z_i = 0
        let w = kkm_witness(spec, |i, v| v.numerators()[i] as f64 / res as f64 >= 0.3)?;
        let c = w.point.coords();
        println!("resolution {res:>2}: witness ({:.4}, {:.4}, {:.4})", c[0], c[1], c[2]);
    }
    Ok(())
}
