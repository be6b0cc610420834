// Refuse to build with an empty CAMEO lookup table.
fn main() {
    for name in ["event_codes.tsv", "countries.tsv", "actor_types.tsv"] {
        let path = format!("data/cameo/{name}");
        println!("cargo:rerun-if-changed={path}");
        let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("cannot read {path}: {e}"));
        let rows = text
            .lines()
            .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
            .count();
        assert!(rows > 0, "{path} has no data rows");
    }
}
