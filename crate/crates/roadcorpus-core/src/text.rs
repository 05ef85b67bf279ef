//! Text normalization shared by tag parsing and prediction matching.

use alloc::string::String;
use alloc::vec::Vec;

use unicode_normalization::UnicodeNormalization;

/// Canonical form for road names: Unicode NFC, internal whitespace
/// collapsed to single spaces, ends trimmed.
pub fn normalize_name(raw: &str) -> String {
    let nfc: String = raw.nfc().collect();
    let parts: Vec<&str> = nfc.split_whitespace().collect();
    parts.join(" ")
}

/// Case-insensitive matching key: [`normalize_name`] plus lowercasing.
pub fn match_key(raw: &str) -> String {
    normalize_name(raw).to_lowercase()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collapses_whitespace_and_trims() {
        assert_eq!(normalize_name(" Ilam  Road "), "Ilam Road");
        assert_eq!(normalize_name("Main\tNorth\nRoad"), "Main North Road");
    }

    #[test]
    fn nfc_composes_combining_marks() {
        // "e" + combining acute vs precomposed "é"
        assert_eq!(normalize_name("Caf\u{0065}\u{0301} Street"), "Café Street");
    }

    #[test]
    fn idempotent() {
        let once = normalize_name("  Epeng\u{0301}a   Road ");
        assert_eq!(normalize_name(&once), once);
    }

    #[test]
    fn match_key_folds_case() {
        assert_eq!(match_key("SPRINGFIELD  road"), "springfield road");
    }
}
