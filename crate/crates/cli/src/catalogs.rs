//! The shipped catalogs, compiled into the binary so a bare `bellbound`
//! works from any directory.

use bellbound_core::catalog::{parse_catalog, Catalog, CatalogError};
use bellbound_core::BellInequality;

pub const J129: &str = include_str!("../../../catalogs/j129.txt");
pub const CG_BG: &str = include_str!("../../../catalogs/cg_bg.txt");
pub const AVIS: &str = include_str!("../../../catalogs/avis89.txt");

/// Guards the J transcription: the file is the authority for 129 rows of
/// digits, and silent edits must fail loudly.
pub const J129_SHA256: &str = "2f24b2c6b06d310d2b401f06c94660e11a477b9fe5906b425c4b24058dcbbdee";

pub fn sha256_hex(text: &str) -> String {
    use sha2::{Digest, Sha256};
    let mut h = Sha256::new();
    h.update(text.as_bytes());
    let out = h.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

/// All three shipped catalogs merged; names stay unique across files.
pub fn builtin() -> Result<Catalog, CatalogError> {
    let mut merged = Catalog::default();
    for text in [CG_BG, AVIS, J129] {
        let cat = parse_catalog(text)?;
        for entry in cat.entries {
            if merged.entries.iter().any(|e| e.name == entry.name) {
                return Err(CatalogError::DuplicateName { line: 0, name: entry.name });
            }
            merged.entries.push(entry);
        }
    }
    Ok(merged)
}

pub fn lookup(name: &str) -> Result<BellInequality, String> {
    let cat = builtin().map_err(|e| format!("built-in catalog is broken: {e}"))?;
    if let Ok(ineq) = cat.get(name) {
        return Ok(ineq.clone());
    }
    let mut names: Vec<&str> = cat.names().collect();
    names.sort();
    let lowered = name.to_lowercase();
    let near: Vec<&str> = names
        .iter()
        .copied()
        .filter(|n| n.to_lowercase().contains(&lowered) || lowered.contains(&n.to_lowercase()))
        .take(5)
        .collect();
    if near.is_empty() {
        Err(format!("no inequality named `{name}` (catalog holds {} entries)", names.len()))
    } else {
        Err(format!("no inequality named `{name}`; close matches: {}", near.join(", ")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transcription_checksum_holds() {
        assert_eq!(sha256_hex(J129), J129_SHA256, "j129.txt changed; re-verify the rows");
    }

    #[test]
    fn builtin_catalog_merges_uniquely() {
        let cat = builtin().unwrap();
        assert!(cat.entries.len() >= 129);
        let chsh = cat.get("CHSH").unwrap();
        assert_eq!(*chsh, bellbound_core::known::chsh());
        let i1 = cat.get("I1_4422").unwrap();
        assert_eq!(*i1, bellbound_core::known::i4422_1());
    }

    #[test]
    fn lookup_suggests_near_misses() {
        let err = lookup("chsh").unwrap_err();
        assert!(err.contains("CHSH"), "{err}");
    }
}
