//! Construction specs, weight files, posets, graphs and guard overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use lrb::algebra::DEFAULT_WORD_GUARD;
use lrb::constructions::{
    dist_chain_lrb, free_lrb, free_lrb_bar, matroid_lrb, ordered_partitions, q_free_lrb,
    DistributiveLattice, Guards, Matroid, MatroidKind, MatroidSpec,
};
use lrb::exact::parse;
use lrb::poset::FinitePoset;
use lrb::semigroup::{ElementId, Semigroup};
use lrb::spectral::{generators, WeightVector};
use lrb::walks::DEFAULT_DRAW_CAP;
use lrb::Rational;
use serde::Deserialize;
use serde_json::Value;

use crate::error::CliError;

/// Size caps, read from `LRB_GUARD_*` variables when set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GuardConfig {
    pub build: Guards,
    pub words: u128,
    pub draws: usize,
}

impl Default for GuardConfig {
    fn default() -> Self {
        Self {
            build: Guards::default(),
            words: DEFAULT_WORD_GUARD,
            draws: DEFAULT_DRAW_CAP,
        }
    }
}

impl GuardConfig {
    pub fn from_env() -> Result<Self, CliError> {
        Self::from_lookup(|k| std::env::var(k).ok())
    }

    pub fn from_lookup(get: impl Fn(&str) -> Option<String>) -> Result<Self, CliError> {
        fn read<T: std::str::FromStr>(
            get: &impl Fn(&str) -> Option<String>,
            key: &str,
            default: T,
        ) -> Result<T, CliError> {
            match get(key) {
                None => Ok(default),
                Some(v) => v
                    .trim()
                    .parse()
                    .map_err(|_| CliError::parse(format!("{key}: cannot read `{v}`"))),
            }
        }
        let d = Self::default();
        Ok(Self {
            build: Guards {
                max_elements: read(&get, "LRB_GUARD_ELEMENTS", d.build.max_elements)?,
                table_cap: read(&get, "LRB_GUARD_TABLE", d.build.table_cap)?,
            },
            words: read(&get, "LRB_GUARD_WORDS", d.words)?,
            draws: read(&get, "LRB_GUARD_DRAWS", d.draws)?,
        })
    }
}

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::parse(format!(
            "{}:{}:{}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum MatroidInput {
    Graph {
        #[serde(default)]
        edges: Vec<(usize, usize)>,
        /// Edge-list CSV, relative to the input file.
        #[serde(default)]
        edges_file: Option<PathBuf>,
    },
    Vectors {
        q: usize,
        columns: Vec<Vec<u8>>,
        #[serde(default)]
        labels: Option<Vec<String>>,
    },
    Sets {
        ground: Vec<String>,
        independent: Vec<Vec<String>>,
    },
    Uniform {
        k: usize,
        m: usize,
    },
}

/// A node of a poset file: an index into `elements` or an element label.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum NodeRef {
    Index(usize),
    Label(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetInput {
    pub elements: Vec<Value>,
    pub covers: Vec<(NodeRef, NodeRef)>,
}

impl PosetInput {
    fn labels(&self) -> Vec<String> {
        self.elements
            .iter()
            .map(|v| match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            })
            .collect()
    }

    fn resolve(&self, labels: &[String]) -> Result<Vec<(usize, usize)>, CliError> {
        let find = |r: &NodeRef| match r {
            NodeRef::Index(i) if *i < labels.len() => Ok(*i),
            NodeRef::Index(i) => Err(CliError::parse(format!(
                "cover refers to element {i}, only {} exist",
                labels.len()
            ))),
            NodeRef::Label(s) => labels
                .iter()
                .position(|l| l == s)
                .ok_or_else(|| CliError::parse(format!("cover refers to unknown element `{s}`"))),
        };
        self.covers
            .iter()
            .map(|(a, b)| Ok((find(a)?, find(b)?)))
            .collect()
    }

    pub fn to_poset(&self) -> Result<FinitePoset, CliError> {
        let labels = self.labels();
        let covers = self.resolve(&labels)?;
        Ok(FinitePoset::from_covers(labels, &covers)?)
    }

    pub fn to_distributive(&self) -> Result<DistributiveLattice, CliError> {
        let labels = self.labels();
        let covers = self.resolve(&labels)?;
        Ok(DistributiveLattice::from_covers(labels, &covers)?)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum LatticeInput {
    Grid { grid: (usize, usize) },
    Explicit(PosetInput),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConstructionSpec {
    FreeLrb { n: usize },
    FreeLrbBar { n: usize },
    QFree { n: usize, q: usize },
    QFreeBar { n: usize, q: usize },
    OrderedPartitions { n: usize },
    Matroid { matroid: MatroidInput },
    MatroidFlags { matroid: MatroidInput },
    DistChain { lattice: LatticeInput },
}

/// The tabulated exchange format.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableInput {
    pub label: String,
    pub elements: Vec<String>,
    pub identity: usize,
    pub table: Vec<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub enum SemigroupSource {
    Construction(ConstructionSpec),
    Table(TableInput),
}

impl SemigroupSource {
    pub fn from_value(v: Value) -> Result<Self, CliError> {
        if v.get("type").is_some() {
            Ok(SemigroupSource::Construction(serde_json::from_value(v)?))
        } else if v.get("table").is_some() {
            Ok(SemigroupSource::Table(serde_json::from_value(v)?))
        } else {
            Err(CliError::parse("spec needs a `type` field or a `table`"))
        }
    }
}

pub fn read_edge_csv(path: &Path) -> Result<Vec<(usize, usize)>, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    let mut edges = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() != 2 {
            return Err(CliError::parse(format!(
                "{} line {}: expected `u,v`",
                path.display(),
                i + 1
            )));
        }
        match (rec[0].parse::<usize>(), rec[1].parse::<usize>()) {
            (Ok(u), Ok(v)) => edges.push((u, v)),
            _ if i == 0 => continue,
            _ => {
                return Err(CliError::parse(format!(
                    "{} line {}: `{}` is not an edge",
                    path.display(),
                    i + 1,
                    rec.as_slice()
                )))
            }
        }
    }
    Ok(edges)
}

/// Edges from a JSON `{"edges": [[u,v]]}` file or an edge-list CSV.
pub fn read_graph(path: &Path) -> Result<Vec<(usize, usize)>, CliError> {
    if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
    {
        return read_edge_csv(path);
    }
    #[derive(Deserialize)]
    struct Graph {
        edges: Vec<(usize, usize)>,
    }
    let g: Graph = serde_json::from_value(read_json(path)?)?;
    Ok(g.edges)
}

impl MatroidInput {
    pub fn build(&self, base: &Path) -> Result<Matroid, CliError> {
        let spec = match self {
            MatroidInput::Graph { edges, edges_file } => {
                let mut all = edges.clone();
                if let Some(f) = edges_file {
                    all.extend(read_edge_csv(&base.join(f))?);
                }
                MatroidSpec::Graph { edges: all }
            }
            MatroidInput::Vectors { q, columns, labels } => MatroidSpec::Vectors {
                q: *q,
                columns: columns.clone(),
                labels: labels.clone(),
            },
            MatroidInput::Sets {
                ground,
                independent,
            } => MatroidSpec::Sets {
                ground: ground.clone(),
                independent: independent.clone(),
            },
            MatroidInput::Uniform { k, m } => MatroidSpec::Uniform { k: *k, m: *m },
        };
        Ok(Matroid::build(&spec)?)
    }
}

impl ConstructionSpec {
    pub fn build(&self, base: &Path, guards: &Guards) -> Result<Semigroup, CliError> {
        Ok(match self {
            ConstructionSpec::FreeLrb { n } => free_lrb(*n, guards)?,
            ConstructionSpec::FreeLrbBar { n } => free_lrb_bar(*n, guards)?,
            ConstructionSpec::QFree { n, q } => q_free_lrb(*n, *q, false, guards)?,
            ConstructionSpec::QFreeBar { n, q } => q_free_lrb(*n, *q, true, guards)?,
            ConstructionSpec::OrderedPartitions { n } => ordered_partitions(*n, guards)?,
            ConstructionSpec::Matroid { matroid } => {
                matroid_lrb(&matroid.build(base)?, MatroidKind::OrderedBases, guards)?
            }
            ConstructionSpec::MatroidFlags { matroid } => {
                matroid_lrb(&matroid.build(base)?, MatroidKind::FlagChains, guards)?
            }
            ConstructionSpec::DistChain { lattice } => {
                let d = match lattice {
                    LatticeInput::Grid { grid: (p, q) } => DistributiveLattice::grid(*p, *q),
                    LatticeInput::Explicit(p) => p.to_distributive()?,
                };
                dist_chain_lrb(&d, guards)?
            }
        })
    }

    /// `n` when this is a free LRB.
    pub fn free_rank(&self) -> Option<usize> {
        match self {
            ConstructionSpec::FreeLrb { n } => Some(*n),
            _ => None,
        }
    }
}

impl SemigroupSource {
    pub fn build(&self, base: &Path, guards: &Guards) -> Result<Semigroup, CliError> {
        match self {
            SemigroupSource::Construction(c) => c.build(base, guards),
            SemigroupSource::Table(t) => {
                guards
                    .max_elements
                    .checked_sub(t.elements.len())
                    .ok_or_else(|| {
                        CliError::Guard(format!(
                            "table has {} elements, limit is {}",
                            t.elements.len(),
                            guards.max_elements
                        ))
                    })?;
                Ok(Semigroup::from_table(
                    t.label.clone(),
                    t.elements.clone(),
                    t.identity,
                    &t.table,
                )?)
            }
        }
    }
}

/// Reads a spec file and builds its semigroup.
pub fn load_semigroup(
    path: &Path,
    guards: &Guards,
) -> Result<(SemigroupSource, Semigroup), CliError> {
    let source = SemigroupSource::from_value(read_json(path)?)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let s = source.build(base, guards)?;
    Ok((source, s))
}

/// Which elements `--uniform-on` spreads weight over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selector {
    Generators,
    Length(u32),
    All,
}

impl std::str::FromStr for Selector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "generators" => Ok(Selector::Generators),
            "all" => Ok(Selector::All),
            _ => s
                .strip_prefix("length:")
                .and_then(|k| k.parse().ok())
                .map(Selector::Length)
                .ok_or_else(|| format!("expected generators, all or length:K, got `{s}`")),
        }
    }
}

impl Selector {
    pub fn elements(self, s: &Semigroup) -> Result<Vec<ElementId>, CliError> {
        let ids: Vec<ElementId> = match self {
            Selector::Generators => generators(s)?,
            Selector::All => (0..s.len()).filter(|&x| x != s.identity()).collect(),
            Selector::Length(k) => {
                if s.grades().is_none() {
                    return Err(CliError::parse(format!(
                        "{} has no element lengths",
                        s.label()
                    )));
                }
                (0..s.len()).filter(|&x| s.grade(x) == Some(k)).collect()
            }
        };
        if ids.is_empty() {
            return Err(CliError::parse(format!(
                "the selector picks no elements of {}",
                s.label()
            )));
        }
        Ok(ids)
    }
}

/// Where walk weights come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightSource {
    File(PathBuf),
    Uniform(Selector),
    Random { on: Selector, seed: u64 },
}

/// A weight file maps element keys to `"p/q"` strings or integers.
pub fn parse_weights(s: &Semigroup, v: &Value) -> Result<WeightVector, CliError> {
    let map: BTreeMap<String, Value> = serde_json::from_value(v.clone())?;
    let mut entries: Vec<(&str, Rational)> = Vec::with_capacity(map.len());
    for (k, c) in &map {
        let r = match c {
            Value::String(t) => parse(t)?,
            Value::Number(n) if n.is_i64() => Rational::from_integer(n.as_i64().unwrap().into()),
            other => {
                return Err(CliError::parse(format!(
                    "weight of `{k}` must be \"p/q\" or an integer, got {other}"
                )))
            }
        };
        entries.push((k.as_str(), r));
    }
    Ok(WeightVector::from_keys(s, entries)?)
}

impl WeightSource {
    pub fn load(&self, s: &Semigroup) -> Result<WeightVector, CliError> {
        match self {
            WeightSource::File(p) => parse_weights(s, &read_json(p)?),
            WeightSource::Uniform(sel) => Ok(WeightVector::uniform(s, &sel.elements(s)?)?),
            WeightSource::Random { on, seed } => {
                Ok(WeightVector::random(s, &on.elements(s)?, *seed)?)
            }
        }
    }
}
