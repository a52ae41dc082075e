//! Instance file parsing.
//!
//! Text format (1-based node indices):
//!
//! ```text
//! nodes: 5
//! arc: 3 2        # directed pair x3 → x2
//! edge: 1 4       # both arcs
//! relation: 2     # switch to the second relation of a tuple
//! open: 2 5       # one open set per line; bare `open:` is ∅
//! family: all-nonempty
//! # comments and blank lines are ignored
//! ```
//!
//! Omitting `open:` lines selects the discrete topology.

use hyperrel_core::family::{parse_family, FamilySpec};
use hyperrel_core::nodes::NodeSet;
use hyperrel_core::relations::BooleanRelation;
use hyperrel_core::topology::FiniteTopology;

#[derive(Debug)]
pub struct InstanceFile {
    pub n: usize,
    pub relations: Vec<BooleanRelation>,
    pub topology: FiniteTopology,
    pub family: Option<FamilySpec>,
}

pub fn parse_instance(text: &str) -> Result<InstanceFile, String> {
    let mut n: Option<usize> = None;
    let mut relations: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    let mut current = 0usize;
    let mut opens: Vec<NodeSet> = Vec::new();
    let mut saw_opens = false;
    let mut family: Option<FamilySpec> = None;

    let at = |line_no: usize, msg: String| format!("line {}: {}", line_no + 1, msg);

    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| at(line_no, format!("expected `key: ...`, got `{line}`")))?;
        let rest = rest.trim();
        let need_n = || n.ok_or_else(|| at(line_no, "`nodes:` must come first".into()));
        let parse_node = |tok: &str| -> Result<usize, String> {
            let i: usize =
                tok.parse().map_err(|_| at(line_no, format!("bad node index `{tok}`")))?;
            let n = n.ok_or_else(|| at(line_no, "`nodes:` must come first".into()))?;
            if i == 0 || i > n {
                return Err(at(line_no, format!("node {i} outside 1..={n}")));
            }
            Ok(i - 1)
        };
        match key.trim() {
            "nodes" => {
                let v: usize =
                    rest.parse().map_err(|_| at(line_no, format!("bad node count `{rest}`")))?;
                if v == 0 || v > 64 {
                    return Err(at(line_no, format!("node count {v} outside 1..=64")));
                }
                n = Some(v);
            }
            "arc" | "edge" => {
                need_n()?;
                let mut toks = rest.split_whitespace();
                let (a, b) = match (toks.next(), toks.next(), toks.next()) {
                    (Some(a), Some(b), None) => (parse_node(a)?, parse_node(b)?),
                    _ => return Err(at(line_no, "expected exactly two node indices".into())),
                };
                relations[current].push((a, b));
                if key.trim() == "edge" {
                    relations[current].push((b, a));
                }
            }
            "relation" => {
                need_n()?;
                let k: usize = rest
                    .parse()
                    .map_err(|_| at(line_no, format!("bad relation index `{rest}`")))?;
                if k != relations.len() + 1 && k != relations.len() {
                    return Err(at(
                        line_no,
                        format!("relations must be introduced in order; expected {}", relations.len() + 1),
                    ));
                }
                if k == relations.len() + 1 {
                    relations.push(Vec::new());
                }
                current = k - 1;
            }
            "open" => {
                need_n()?;
                saw_opens = true;
                let mut s = NodeSet::empty();
                for tok in rest.split_whitespace() {
                    s.insert(parse_node(tok)?);
                }
                opens.push(s);
            }
            "family" => {
                family =
                    Some(parse_family(rest).map_err(|e| at(line_no, e.to_string()))?);
            }
            other => return Err(at(line_no, format!("unknown key `{other}`"))),
        }
    }

    let n = n.ok_or_else(|| "missing `nodes:` line".to_string())?;
    let topology = if saw_opens {
        FiniteTopology::validate(n, &opens).map_err(|e| format!("topology: {e}"))?
    } else {
        if n > 16 {
            return Err(format!("discrete default topology needs n ≤ 16, got {n}"));
        }
        FiniteTopology::discrete(n)
    };
    let relations = relations
        .into_iter()
        .map(|arcs| BooleanRelation::from_arcs(n, &arcs).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(InstanceFile { n, relations, topology, family })
}
