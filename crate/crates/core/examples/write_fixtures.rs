//! Writes the fixture corpus as `.map` files into the given directory (default `fixtures`).

fn main() -> std::io::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "fixtures".into());
    std::fs::create_dir_all(&dir)?;
    for (name, map) in intervaldyn_core::fixtures::corpus() {
        std::fs::write(format!("{dir}/{name}.map"), format!("# {name}\n{}", map.to_text()))?;
    }
    Ok(())
}
