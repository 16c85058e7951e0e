use obliq_core::protocol::DatabaseState;

use crate::error::CliError;

/// Parses `--db`. The canonical form is the whole configuration index in
/// hex, `ceil(km/4)` digits. When the length instead equals
/// `k·ceil(m/4)`, the digits are read as one group per item, item 0 first.
pub fn parse_db(text: &str, k: usize, m: usize) -> Result<DatabaseState, CliError> {
    let bad = |why: String| CliError::Usage(format!("invalid --db {text:?} for k = {k}, m = {m}: {why}"));
    if text.is_empty() || !text.chars().all(|c| c.is_ascii_hexdigit()) {
        return Err(bad("expected hex digits".into()));
    }
    if k == 0 || m == 0 || k * m > 60 {
        return Err(bad("unsupported shape".into()));
    }
    let whole_len = (k * m).div_ceil(4);
    let per_item = m.div_ceil(4);
    if text.len() == whole_len {
        let value = u64::from_str_radix(text, 16).map_err(|e| bad(e.to_string()))?;
        if value >> (k * m) != 0 {
            return Err(bad(format!("value exceeds {} bits", k * m)));
        }
        return DatabaseState::from_index(k, m, value as usize).map_err(|e| bad(e.to_string()));
    }
    if text.len() == k * per_item {
        let items = (0..k)
            .map(|t| {
                let group = &text[t * per_item..(t + 1) * per_item];
                let v = u32::from_str_radix(group, 16).map_err(|e| bad(e.to_string()))?;
                if (v as u64) >> m != 0 {
                    return Err(bad(format!("item {t} = {v} exceeds {m} bits")));
                }
                Ok(v)
            })
            .collect::<Result<Vec<_>, _>>()?;
        return DatabaseState::from_items(items, m).map_err(|e| bad(e.to_string()));
    }
    Err(bad(format!(
        "expected {whole_len} hex digits (or {} with one group per item)",
        k * per_item
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        let db = parse_db("01", 2, 1).unwrap();
        assert_eq!(db.items(), &[0, 1]);
        assert_eq!(parse_db("1", 2, 1).unwrap().items(), &[0, 1]);
        assert!(parse_db("5", 2, 1).is_err());
        assert!(parse_db("02", 2, 1).is_err());
        assert_eq!(parse_db("2C9", 3, 4).unwrap().items(), &[2, 12, 9]);
        assert_eq!(parse_db("2d", 3, 2).unwrap().items(), &[2, 3, 1]);
        assert_eq!(parse_db("231", 3, 2).unwrap().items(), &[2, 3, 1]);
        assert!(parse_db("2C9", 3, 2).is_err());
        assert!(parse_db("zz", 2, 1).is_err());
        assert!(parse_db("", 2, 1).is_err());
    }
}
