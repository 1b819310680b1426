//! Plain-text catalogs of named Bell expressions.
//!
//! A catalog is a line-oriented file. `#scenario M N` directives set the
//! number of settings per side for the entries that follow; other `#` lines
//! are comments. Each entry is a name, a tab, and the coefficients in one of
//! two forms:
//!
//! * **compact** — a string of single digits with optional `-` signs, listing
//!   `b_a`, `b_b`, then the joint block row by row. The threshold is 0 and
//!   every coefficient is a one-digit integer. Example (two settings a side):
//!   `chsh\t-10-10111-1` stands for `-p_A1 - p_B1 + p_11 + p_12 + p_21 - p_22 ≤ 0`.
//! * **general** — the same coefficient order as space-separated rationals,
//!   then `<=` or `>=` and the threshold. A `>=` entry is normalized on read
//!   by negating through.
//!
//! Writing prefers the compact form whenever an entry qualifies, and a
//! written catalog parses back to exactly the same entries.

use std::fmt::Write as _;

use num_traits::{Signed, Zero};

use crate::ineq::{BellInequality, Scenario};
use crate::rat::{parse_rat, Rat};

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("line {line}: entry before any #scenario directive")]
    MissingScenario { line: usize },
    #[error("line {line}: malformed #scenario directive (want `#scenario M N`)")]
    BadScenario { line: usize },
    #[error("line {line}: expected `name<TAB>coefficients`")]
    MissingTab { line: usize },
    #[error("line {line}, column {col}: bad compact coefficient string: {reason}")]
    BadCompact { line: usize, col: usize, reason: String },
    #[error("line {line}, column {col}: bad coefficient list: {reason}")]
    BadGeneral { line: usize, col: usize, reason: String },
    #[error("line {line}: duplicate entry name `{name}`")]
    DuplicateName { line: usize, name: String },
    #[error("no entry named `{0}` in catalog")]
    NotFound(String),
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub ineq: BellInequality,
}

#[derive(Clone, Debug, Default)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn get(&self, name: &str) -> Result<&BellInequality, CatalogError> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .map(|e| &e.ineq)
            .ok_or_else(|| CatalogError::NotFound(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.name.as_str())
    }

    pub fn push(&mut self, name: impl Into<String>, ineq: BellInequality) {
        self.entries.push(CatalogEntry { name: name.into(), ineq });
    }
}

/// Parse a compact digit string against a known scenario.
pub fn parse_compact(digits: &str, sc: Scenario) -> Result<BellInequality, String> {
    parse_compact_inner(digits, sc).map_err(|(_, reason)| reason)
}

/// Like [`parse_compact`], but errors carry the byte offset of the offending
/// position so file parsers can report a column.
fn parse_compact_inner(digits: &str, sc: Scenario) -> Result<BellInequality, (usize, String)> {
    let mut coeffs: Vec<i64> = Vec::with_capacity(sc.dim());
    let mut sign = 1i64;
    for (pos, ch) in digits.char_indices() {
        match ch {
            '-' => {
                if sign < 0 {
                    return Err((pos, "doubled sign".into()));
                }
                sign = -1;
            }
            '0'..='9' => {
                coeffs.push(sign * (ch as i64 - '0' as i64));
                sign = 1;
            }
            other => return Err((pos, format!("unexpected character `{other}`"))),
        }
    }
    if sign < 0 {
        return Err((digits.len() - 1, "trailing sign".into()));
    }
    if coeffs.len() != sc.dim() {
        return Err((
            0,
            format!("got {} coefficients, scenario {} needs {}", coeffs.len(), sc, sc.dim()),
        ));
    }
    let b_a: Vec<i64> = coeffs[..sc.m_a].to_vec();
    let b_b: Vec<i64> = coeffs[sc.m_a..sc.m_a + sc.m_b].to_vec();
    let rows: Vec<&[i64]> = coeffs[sc.m_a + sc.m_b..].chunks(sc.m_b).collect();
    Ok(BellInequality::from_ints(&b_a, &b_b, &rows, 0))
}

/// Compact digit string, if the entry qualifies (integer one-digit
/// coefficients, zero threshold).
pub fn compact_digits(ineq: &BellInequality) -> Option<String> {
    if !ineq.b0.is_zero() {
        return None;
    }
    let mut s = String::new();
    let mut push = |x: &Rat| -> Option<()> {
        if !x.is_integer() {
            return None;
        }
        let n = x.to_integer();
        if n.magnitude() > &9u32.into() {
            return None;
        }
        if n.is_negative() {
            s.push('-');
        }
        let _ = write!(s, "{}", n.magnitude());
        Some(())
    };
    for x in &ineq.b_a {
        push(x)?;
    }
    for x in &ineq.b_b {
        push(x)?;
    }
    for row in &ineq.b_ab {
        for x in row {
            push(x)?;
        }
    }
    Some(s)
}

fn parse_general(body: &str, sc: Scenario) -> Result<BellInequality, (usize, String)> {
    let offset_of = |tok: &str| tok.as_ptr() as usize - body.as_ptr() as usize;
    let tokens: Vec<&str> = body.split_whitespace().collect();
    let rel_pos = tokens
        .iter()
        .position(|&t| t == "<=" || t == ">=")
        .ok_or((0usize, "missing `<=` or `>=`".to_string()))?;
    if rel_pos != sc.dim() {
        return Err((
            offset_of(tokens[rel_pos]),
            format!(
                "got {} coefficients before the relation, scenario {} needs {}",
                rel_pos,
                sc,
                sc.dim()
            ),
        ));
    }
    if rel_pos + 2 != tokens.len() {
        return Err((0, "expected exactly one threshold after the relation".into()));
    }
    let mut coeffs: Vec<Rat> = Vec::with_capacity(sc.dim() + 1);
    for t in &tokens[..rel_pos] {
        coeffs
            .push(parse_rat(t).ok_or_else(|| (offset_of(t), format!("bad rational `{t}`")))?);
    }
    let mut b0 = parse_rat(tokens[rel_pos + 1]).ok_or_else(|| {
        (offset_of(tokens[rel_pos + 1]), format!("bad threshold `{}`", tokens[rel_pos + 1]))
    })?;
    if tokens[rel_pos] == ">=" {
        for c in &mut coeffs {
            *c = -c.clone();
        }
        b0 = -b0;
    }
    let b_a = coeffs[..sc.m_a].to_vec();
    let b_b = coeffs[sc.m_a..sc.m_a + sc.m_b].to_vec();
    let b_ab = coeffs[sc.m_a + sc.m_b..]
        .chunks(sc.m_b)
        .map(|c| c.to_vec())
        .collect();
    BellInequality::new(sc, b_a, b_b, b_ab, b0).map_err(|e| (0, e.to_string()))
}

fn format_general(ineq: &BellInequality) -> String {
    let mut s = String::new();
    let mut coeffs = ineq.coeff_vec();
    let b0 = coeffs.remove(0);
    for c in &coeffs {
        let _ = write!(s, "{} ", c);
    }
    let _ = write!(s, "<= {}", b0);
    s
}

/// Parse a whole catalog file.
pub fn parse_catalog(text: &str) -> Result<Catalog, CatalogError> {
    let mut catalog = Catalog::default();
    let mut scenario: Option<Scenario> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            let mut words = rest.split_whitespace();
            if words.next() == Some("scenario") {
                let m_a = words.next().and_then(|w| w.parse::<usize>().ok());
                let m_b = words.next().and_then(|w| w.parse::<usize>().ok());
                match (m_a, m_b, words.next()) {
                    (Some(a), Some(b), None) if a >= 1 && b >= 1 => {
                        scenario = Some(Scenario::new(a, b));
                    }
                    _ => return Err(CatalogError::BadScenario { line }),
                }
            }
            continue; // other # lines are comments
        }
        let (name, body) = trimmed
            .split_once('\t')
            .ok_or(CatalogError::MissingTab { line })?;
        let name = name.trim();
        let body = body.trim();
        let sc = scenario.ok_or(CatalogError::MissingScenario { line })?;
        if catalog.entries.iter().any(|e| e.name == name) {
            return Err(CatalogError::DuplicateName { line, name: name.to_string() });
        }
        // Column numbers are 1-based and count from the start of the raw line.
        let body_col = body.as_ptr() as usize - raw.as_ptr() as usize;
        let is_general = body.contains("<=") || body.contains(">=");
        let ineq = if is_general {
            parse_general(body, sc).map_err(|(off, reason)| CatalogError::BadGeneral {
                line,
                col: body_col + off + 1,
                reason,
            })?
        } else {
            parse_compact_inner(body, sc).map_err(|(off, reason)| CatalogError::BadCompact {
                line,
                col: body_col + off + 1,
                reason,
            })?
        };
        catalog.push(name, ineq);
    }
    Ok(catalog)
}

/// Render a catalog, grouping entries under `#scenario` directives in their
/// stored order and preferring the compact form.
pub fn format_catalog(catalog: &Catalog) -> String {
    let mut out = String::new();
    let mut current: Option<Scenario> = None;
    for entry in &catalog.entries {
        let sc = entry.ineq.scenario;
        if current != Some(sc) {
            let _ = writeln!(out, "#scenario {} {}", sc.m_a, sc.m_b);
            current = Some(sc);
        }
        match compact_digits(&entry.ineq) {
            Some(d) => {
                let _ = writeln!(out, "{}\t{}", entry.name, d);
            }
            None => {
                let _ = writeln!(out, "{}\t{}", entry.name, format_general(&entry.ineq));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, ratio};

    #[test]
    fn compact_round_trip_chsh() {
        let sc = Scenario::new(2, 2);
        let c = parse_compact("-10-10111-1", sc).unwrap();
        assert_eq!(c.b_a, vec![rat(-1), rat(0)]);
        assert_eq!(c.b_b, vec![rat(-1), rat(0)]);
        assert_eq!(c.b_ab[0], vec![rat(1), rat(1)]);
        assert_eq!(c.b_ab[1], vec![rat(1), rat(-1)]);
        assert_eq!(compact_digits(&c).unwrap(), "-10-10111-1");
    }

    #[test]
    fn compact_four_setting_entry() {
        // A longer string exercising interior signs and the row-major joint
        // block: 4+4 marginal digits then 16 joint digits.
        let sc = Scenario::new(4, 4);
        let q = parse_compact("0-200-2-2-201-11-12121-111011-10", sc).unwrap();
        assert_eq!(q.b_a, vec![rat(0), rat(-2), rat(0), rat(0)]);
        assert_eq!(q.b_b, vec![rat(-2), rat(-2), rat(-2), rat(0)]);
        assert_eq!(q.b_ab[0], vec![rat(1), rat(-1), rat(1), rat(-1)]);
        assert_eq!(q.b_ab[1], vec![rat(2), rat(1), rat(2), rat(1)]);
        assert_eq!(q.b_ab[2], vec![rat(-1), rat(1), rat(1), rat(0)]);
        assert_eq!(q.b_ab[3], vec![rat(1), rat(1), rat(-1), rat(0)]);
        assert_eq!(compact_digits(&q).unwrap(), "0-200-2-2-201-11-12121-111011-10");
    }

    #[test]
    fn compact_rejects_malformed_strings() {
        let sc = Scenario::new(2, 2);
        assert!(parse_compact("-10-10111", sc).is_err()); // too short
        assert!(parse_compact("-10-10111-1x", sc).is_err()); // junk char
        assert!(parse_compact("--10-10111-1", sc).is_err()); // doubled sign
        assert!(parse_compact("-10-10111-1-", sc).is_err()); // trailing sign
    }

    #[test]
    fn general_form_round_trips_rationals_and_ge() {
        let text = "#scenario 2 2\nhalfed\t-1/2 0 -1/2 0 1/2 1/2 1/2 -1/2 <= 0\nflipped\t1 0 1 0 -1 -1 -1 1 >= 0\n";
        let cat = parse_catalog(text).unwrap();
        let halfed = cat.get("halfed").unwrap();
        assert_eq!(halfed.b_a[0], ratio(-1, 2));
        // `>=` normalizes to the same functional as CHSH.
        let flipped = cat.get("flipped").unwrap();
        assert_eq!(flipped.b_a[0], rat(-1));
        assert_eq!(flipped.b_ab[1][1], rat(-1));
        assert_eq!(flipped.b0, rat(0));
    }

    #[test]
    fn print_then_parse_is_identity() {
        let mut cat = Catalog::default();
        cat.push(
            "chsh",
            BellInequality::from_ints(&[-1, 0], &[-1, 0], &[&[1, 1], &[1, -1]], 0),
        );
        // Needs the general form twice over: a big coefficient and a nonzero
        // threshold with fractions.
        cat.push(
            "wide",
            BellInequality::from_ints(&[-12, 0], &[-1, 0], &[&[10, 1], &[1, -1]], 0),
        );
        let sc = Scenario::new(3, 2);
        cat.push(
            "frac",
            BellInequality::new(
                sc,
                vec![ratio(1, 3), rat(0), rat(-1)],
                vec![rat(0), ratio(-2, 5)],
                vec![
                    vec![rat(1), rat(0)],
                    vec![rat(0), rat(1)],
                    vec![rat(1), rat(1)],
                ],
                ratio(7, 2),
            )
            .unwrap(),
        );
        let text = format_catalog(&cat);
        let back = parse_catalog(&text).unwrap();
        assert_eq!(back.entries.len(), 3);
        for (a, b) in cat.entries.iter().zip(&back.entries) {
            assert_eq!(a.name, b.name);
            assert_eq!(a.ineq, b.ineq);
        }
        // And the text is stable under a second round.
        assert_eq!(format_catalog(&back), text);
    }

    #[test]
    fn scenario_directive_is_required_and_checked() {
        assert!(matches!(
            parse_catalog("x\t-10-10111-1\n"),
            Err(CatalogError::MissingScenario { line: 1 })
        ));
        assert!(matches!(
            parse_catalog("#scenario 2\nx\t-10-10111-1\n"),
            Err(CatalogError::BadScenario { line: 1 })
        ));
        let dup = "#scenario 2 2\nx\t-10-10111-1\nx\t-10-10111-1\n";
        assert!(matches!(
            parse_catalog(dup),
            Err(CatalogError::DuplicateName { line: 3, .. })
        ));
    }

    #[test]
    fn parse_errors_carry_line_and_column() {
        // The `x` sits at byte 8 of line 2 → column 9.
        let text = "#scenario 2 2\nbad\t-10-x0111-1\n";
        match parse_catalog(text) {
            Err(CatalogError::BadCompact { line: 2, col: 9, .. }) => {}
            other => panic!("wrong error: {other:?}"),
        }
        let text = "#scenario 2 2\nbad\t-1 0 -1 0 1 oops 1 -1 <= 0\n";
        match parse_catalog(text) {
            Err(CatalogError::BadGeneral { line: 2, col: 17, .. }) => {}
            other => panic!("wrong error: {other:?}"),
        }
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let text = "# a catalog\n\n#scenario 2 2\n# the one everyone knows\nchsh\t-10-10111-1\n";
        let cat = parse_catalog(text).unwrap();
        assert_eq!(cat.entries.len(), 1);
        assert_eq!(cat.get("chsh").unwrap().classical_bound(), rat(0));
    }
}
