//! Text input to bundle archive and back, as the CLI does.

use pdbundle::io::{load_bundle, parse_input_str, save_bundle, write_input};
use pdbundle::rational::Point;
use pdbundle::{fixtures, Locator, PDBundle};

fn main() -> pdbundle::Result<()> {
    let text = write_input(&fixtures::ff2());
    println!("{text}");
    let bundle = PDBundle::build(parse_input_str(&text)?)?;

    let path = std::env::temp_dir().join("pdbundle-example.json");
    save_bundle(&bundle, &path)?;
    let loaded = load_bundle(&path)?;
    assert_eq!(loaded, bundle);
    println!("archive at {} ({} bytes) reloads identically", path.display(), std::fs::metadata(&path)?.len());

    let (_, d) = Locator::new(&loaded).diagram(&loaded, &Point::from_ints(0, 0), 1)?;
    print!("H1 at the origin:\n{d}");
    std::fs::remove_file(&path)?;
    Ok(())
}
