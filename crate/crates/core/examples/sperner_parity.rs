//! Random admissible labelings of Kuhn grids always have an odd number of
//! fully-labeled cells.
//!
//! cargo run --example sperner_parity

use geohelly::simplex::{find_fully_labeled, GridSpec, Labeling};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> geohelly::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for (dim, res) in [(1, 10), (2, 6), (3, 4), (4, 3)] {
        let spec = GridSpec::new(dim, res)?;
        let labeling = Labeling::from_fn(spec, |v| {
            let support: Vec<usize> = (0..=dim).filter(|&i| v.in_support(i)).collect();
            support[rng.gen_range(0..support.len())]
        });
        assert!(labeling.is_admissible());
        let cells = find_fully_labeled(spec, &labeling)?;
        println!(
            "dim {dim}, resolution {res}: {} cells, {} fully labeled",
            spec.cell_count(),
            cells.len()
        );
        if let Some(c) = cells.first() {
            println!("  first: barycenter {:?}", c.barycenter().coords());
        }
    }
    Ok(())
}
