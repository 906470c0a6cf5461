//! Regenerates the synthetic F tables in `data/synthetic/`.
//!
//!     cargo run --example gen_samples

use std::path::Path;

use hydrogenic_se::dataset::synthetic::{bundled_models, render_bundled};
use hydrogenic_se::dataset::{parse_constants, BUNDLED_CONSTANTS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let constants = parse_constants(BUNDLED_CONSTANTS)?;
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/synthetic");
    std::fs::create_dir_all(&dir)?;
    for m in bundled_models() {
        let path = dir.join(m.file_name);
        std::fs::write(&path, render_bundled(&m, &constants))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
