use crate::error::{Error, Result};
use crate::graph::Cpdag;

/// Number of vertex pairs whose edge status (absent, undirected, or directed
/// either way) differs between the two CPDAGs.
pub fn shd_cpdag(a: &Cpdag, b: &Cpdag) -> Result<usize> {
    let d = a.n_vertices();
    if b.n_vertices() != d {
        return Err(Error::VertexCountMismatch(d, b.n_vertices()));
    }
    let mut count = 0;
    for u in 0..d {
        for v in u + 1..d {
            if a.pair_status(u, v) != b.pair_status(u, v) {
                count += 1;
            }
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cpdag_of, parse_dag, Dag};

    fn c(text: &str) -> Cpdag {
        cpdag_of(&parse_dag(text).unwrap())
    }

    #[test]
    fn reference_distances() {
        assert_eq!(shd_cpdag(&c("[∅|1|2]"), &c("[∅|1|2]")).unwrap(), 0);
        assert_eq!(shd_cpdag(&c("[∅|1|2]"), &c("[∅|13|∅]")).unwrap(), 2);
        assert_eq!(shd_cpdag(&c("[∅|∅|∅]"), &c("[∅|1|12]")).unwrap(), 3);
        assert!(shd_cpdag(&c("[∅|∅]"), &cpdag_of(&Dag::empty(3))).is_err());
    }
}
