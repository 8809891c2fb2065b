//! Field definition files.
//!
//! ```toml
//! label = "Q(i)"
//! poly = "x^2 + 1"
//! assert_irreducible = false   # optional
//! ```

use std::path::Path;

use bcinv_core::numberfield::NumberField;
use bcinv_core::poly::IntPoly;
use serde::Deserialize;

use crate::output::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldFile {
    label: String,
    poly: String,
    #[serde(default)]
    assert_irreducible: bool,
}

pub fn load(path: &Path, seed: u64) -> Result<NumberField, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input("io", format!("cannot read {}: {e}", path.display())))?;
    let file: FieldFile = toml::from_str(&text)
        .map_err(|e| CliError::input("parse", format!("{}: {}", path.display(), e.message())))?;
    let poly: IntPoly = file.poly.parse()?;
    Ok(NumberField::with_assertion(file.label, poly, file.assert_irreducible)?.with_seed(seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(name: &str, body: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join(format!("bcinv-fieldfile-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join(name);
        std::fs::write(&path, body).unwrap();
        path
    }

    #[test]
    fn loads_and_rejects() {
        let ok = write("qi.toml", "label = \"Q(i)\"\npoly = \"x^2 + 1\"\n");
        let k = load(&ok, 7).unwrap();
        assert_eq!(k.degree(), 2);
        assert_eq!(k.label(), "Q(i)");
        assert_eq!(k.seed(), 7);

        let bad = write("bad.toml", "label = \"bad\"\npoly = \"x^2 +* 1\"\n");
        assert_eq!(load(&bad, 0).unwrap_err().exit_code(), 1);
        let extra = write("extra.toml", "label = \"e\"\npoly = \"x\"\ncolour = 1\n");
        assert_eq!(load(&extra, 0).unwrap_err().exit_code(), 1);
        let reducible = write("red.toml", "label = \"r\"\npoly = \"x^2 - 1\"\n");
        assert_eq!(
            load(&reducible, 0).unwrap_err().to_json()["kind"],
            "reducible"
        );
        assert!(load(Path::new("/nonexistent/field.toml"), 0).is_err());
    }
}
