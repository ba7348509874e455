//! Recomputes every oracle fixture and writes it to the fixture directory
//! (`ATTRACTORLAB_FIXTURES`, or `crates/attractorlab/fixtures`).

use attractorlab::fixtures::{fixtures_dir, mint_all, save};

fn main() -> anyhow::Result<()> {
    let dir = fixtures_dir();
    for record in mint_all()? {
        let path = save(&dir, &record)?;
        println!("{}", path.display());
    }
    Ok(())
}
