//! Inline parent-set notation `[S1|S2|...|Sd]`.
//!
//! Each `Sj` lists the 1-based parents of vertex `j`. With fewer than ten
//! vertices every digit is an index, so `12` means `{1, 2}`; with ten or more,
//! indices are separated by commas or blanks. `∅`, `0` and the empty string
//! all denote the empty parent set.

use super::dag::Dag;
use super::vertex_set::VertexSet;
use crate::error::{Error, Result};

const EMPTY_SET: &str = "∅";

pub fn parse_dag(text: &str) -> Result<Dag> {
    let t = text.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::Notation(format!("expected `[...]`, got {t:?}")))?;
    let fields: Vec<&str> = inner.split('|').collect();
    let d = fields.len();
    let mut parents = Vec::with_capacity(d);
    for field in fields {
        parents.push(parse_set(field.trim(), d)?);
    }
    Dag::from_parents(parents)
}

fn parse_set(field: &str, d: usize) -> Result<VertexSet> {
    if field.is_empty() || field == EMPTY_SET || field == "0" {
        return Ok(VertexSet::EMPTY);
    }
    let mut set = VertexSet::EMPTY;
    for token in field.split(|c: char| c == ',' || c.is_whitespace()) {
        if token.is_empty() {
            continue;
        }
        if d < 10 {
            for c in token.chars() {
                let idx = c
                    .to_digit(10)
                    .ok_or_else(|| Error::Notation(format!("unexpected character {c:?}")))?
                    as usize;
                set.insert(to_index(idx, d)?);
            }
        } else {
            let idx: usize = token
                .parse()
                .map_err(|_| Error::Notation(format!("bad index {token:?}")))?;
            set.insert(to_index(idx, d)?);
        }
    }
    Ok(set)
}

fn to_index(one_based: usize, d: usize) -> Result<usize> {
    if one_based == 0 || one_based > d {
        return Err(Error::VertexOutOfRange {
            vertex: one_based,
            d,
        });
    }
    Ok(one_based - 1)
}

pub fn format_dag(g: &Dag) -> String {
    let d = g.n_vertices();
    let fields: Vec<String> = g
        .parent_sets()
        .iter()
        .map(|pa| {
            if pa.is_empty() {
                EMPTY_SET.to_string()
            } else if d < 10 {
                pa.iter().map(|k| (k + 1).to_string()).collect()
            } else {
                pa.iter()
                    .map(|k| (k + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            }
        })
        .collect();
    format!("[{}]", fields.join("|"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_reference_examples() {
        let chain = parse_dag("[∅|1|2]").unwrap();
        assert_eq!(chain.edges(), vec![(0, 1), (1, 2)]);
        let complete = parse_dag("[∅|1|12]").unwrap();
        assert_eq!(complete.n_edges(), 3);
        assert!(matches!(parse_dag("[2|1]"), Err(Error::Cyclic)));
    }

    #[test]
    fn accepts_all_empty_spellings_and_separators() {
        let a = parse_dag("[0||∅]").unwrap();
        assert_eq!(a, Dag::empty(3));
        assert_eq!(parse_dag("[∅|1|1, 2]").unwrap(), parse_dag("[∅|1|12]").unwrap());
    }

    #[test]
    fn rejects_malformed_text() {
        assert!(matches!(parse_dag("∅|1"), Err(Error::Notation(_))));
        assert!(matches!(parse_dag("[∅|x]"), Err(Error::Notation(_))));
        assert!(matches!(parse_dag("[∅|3]"), Err(Error::VertexOutOfRange { .. })));
        assert!(matches!(parse_dag("[1|∅]"), Err(Error::SelfLoop(0))));
    }

    #[test]
    fn wide_graphs_use_separated_indices() {
        let mut parents = vec![VertexSet::EMPTY; 12];
        parents[11] = VertexSet::from([0, 10]);
        let g = Dag::from_parents(parents).unwrap();
        let s = format_dag(&g);
        assert!(s.ends_with("|1,11]"), "{s}");
        assert_eq!(parse_dag(&s).unwrap(), g);
    }

    proptest! {
        #[test]
        fn format_parse_round_trip(d in 1usize..14, bits in proptest::collection::vec(any::<u64>(), 14)) {
            // orient every edge from lower to higher index
            let parents: Vec<VertexSet> = (0..d)
                .map(|j| VertexSet::from_bits(bits[j] & ((1u64 << j) - 1)))
                .collect();
            let g = Dag::from_parents(parents).unwrap();
            let text = format_dag(&g);
            let back = parse_dag(&text).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(format_dag(&back), text);
        }
    }
}
