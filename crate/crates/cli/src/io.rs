//! JSON interchange formats.
//!
//! Every top-level payload carries `"format": "chromsym/1"`. Rationals are
//! strings `"num/den"` in lowest terms with a positive denominator; plain
//! integers are accepted on input.

use std::collections::BTreeMap;
use std::str::FromStr;

use chromsym_core::graphs::{LabelPermutation, LabelledGraph};
use chromsym_core::kernel::{GraphCombination, KernelCertificate};
use chromsym_core::multisym::{Basis, MultiSym};
use chromsym_core::partitions::{KTuple, KTuplePartition};
use chromsym_core::posets::{Poset, Reduction};
use chromsym_core::Rational;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const FORMAT: &str = "chromsym/1";

pub fn rational_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational, CliError> {
    let r = Rational::from_str(s.trim()).map_err(|_| CliError::Parse(format!("bad rational {s:?}")))?;
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: String,
    pub weight: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    pub k: usize,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<(String, String)>,
}

impl GraphJson {
    pub fn from_graph(g: &LabelledGraph) -> Self {
        GraphJson {
            format: None,
            k: g.k(),
            vertices: g
                .vertices()
                .iter()
                .map(|v| VertexJson { id: v.id.clone(), weight: v.weight.entries().to_vec() })
                .collect(),
            edges: g.edge_ids().map(|(a, b)| (a.to_owned(), b.to_owned())).collect(),
        }
    }

    pub fn to_graph(&self) -> Result<LabelledGraph, CliError> {
        let mut vertices = Vec::with_capacity(self.vertices.len());
        for v in &self.vertices {
            vertices.push((v.id.clone(), KTuple::new(v.weight.clone())?));
        }
        let edges: Vec<(&str, &str)> = self.edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        Ok(LabelledGraph::new(self.k, vertices, &edges)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub index: Vec<Vec<u32>>,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiSymJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    pub k: usize,
    pub basis: String,
    pub terms: Vec<TermJson>,
}

fn index_json(lambda: &KTuplePartition) -> Vec<Vec<u32>> {
    lambda.parts().iter().map(|t| t.entries().to_vec()).collect()
}

fn index_from_json(k: usize, rows: &[Vec<u32>]) -> Result<KTuplePartition, CliError> {
    let parts = rows.iter().map(|r| KTuple::new(r.clone())).collect::<Result<Vec<_>, _>>()?;
    Ok(KTuplePartition::new(k, parts)?)
}

fn terms_json<'a>(terms: impl Iterator<Item = (&'a KTuplePartition, &'a Rational)>) -> Vec<TermJson> {
    terms.map(|(lambda, c)| TermJson { index: index_json(lambda), coeff: rational_to_string(c) }).collect()
}

impl MultiSymJson {
    pub fn from_multisym(f: &MultiSym) -> Self {
        MultiSymJson {
            format: Some(FORMAT.into()),
            k: f.k(),
            basis: f.basis().name().into(),
            terms: terms_json(f.terms().iter()),
        }
    }

    pub fn to_multisym(&self) -> Result<MultiSym, CliError> {
        let basis =
            Basis::from_name(&self.basis).ok_or_else(|| CliError::Parse(format!("unknown basis {:?}", self.basis)))?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            terms.push((index_from_json(self.k, &t.index)?, parse_rational(&t.coeff)?));
        }
        Ok(MultiSym::from_terms(self.k, basis, terms)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinationTermJson {
    pub coeff: String,
    pub graph: GraphJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinationJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    pub k: usize,
    pub terms: Vec<CombinationTermJson>,
}

impl CombinationJson {
    pub fn from_combination(l: &GraphCombination) -> Self {
        CombinationJson {
            format: None,
            k: l.k(),
            terms: l
                .terms()
                .iter()
                .map(|(c, g)| CombinationTermJson { coeff: rational_to_string(c), graph: GraphJson::from_graph(g) })
                .collect(),
        }
    }

    /// An empty term list denotes the zero combination on no vertices.
    pub fn to_combination(&self) -> Result<GraphCombination, CliError> {
        if self.terms.is_empty() {
            let empty = LabelledGraph::from_indices(self.k, Vec::new(), Vec::new())?;
            return Ok(GraphCombination::zero(&empty)?);
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let g = t.graph.to_graph()?;
            if g.k() != self.k {
                return Err(CliError::Parse(format!("term graph has k = {}, combination has k = {}", g.k(), self.k)));
            }
            terms.push((parse_rational(&t.coeff)?, g));
        }
        Ok(GraphCombination::new(terms)?)
    }
}

/// A permutation as one `id → id` map per block of `template`. Fixed ids are omitted.
pub type PermutationJson = Vec<BTreeMap<String, String>>;

pub fn permutation_json(sigma: &LabelPermutation, template: &LabelledGraph) -> PermutationJson {
    let mut out = vec![BTreeMap::new(); template.k()];
    for (a, b) in sigma.pairs() {
        let block = template
            .index_of(a)
            .and_then(|i| template.weight(i).unit_index())
            .unwrap_or(0);
        out[block].insert(a.to_owned(), b.to_owned());
    }
    out
}

pub fn permutation_from_json(p: &PermutationJson) -> Result<LabelPermutation, CliError> {
    let pairs = p.iter().flat_map(|m| m.iter().map(|(a, b)| (a.clone(), b.clone())));
    Ok(LabelPermutation::new(pairs)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoTermJson {
    pub coeff: String,
    pub graph: GraphJson,
    pub sigma: PermutationJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OsTermJson {
    pub coeff: String,
    pub t: [usize; 3],
    pub host: GraphJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub format: String,
    pub k: usize,
    pub template: GraphJson,
    pub iso_terms: Vec<IsoTermJson>,
    pub os_terms: Vec<OsTermJson>,
    pub residual: Vec<TermJson>,
    pub sufficient_set: Vec<PermutationJson>,
}

impl CertificateJson {
    pub fn from_certificate(c: &KernelCertificate) -> Self {
        let t = &c.template;
        CertificateJson {
            format: FORMAT.into(),
            k: t.k(),
            template: GraphJson::from_graph(t),
            iso_terms: c
                .iso_terms
                .iter()
                .map(|i| IsoTermJson {
                    coeff: rational_to_string(&i.coeff),
                    graph: GraphJson::from_graph(&i.graph),
                    sigma: permutation_json(&i.sigma, t),
                })
                .collect(),
            os_terms: c
                .os_terms
                .iter()
                .map(|o| OsTermJson { coeff: rational_to_string(&o.coeff), t: o.t, host: GraphJson::from_graph(&o.host) })
                .collect(),
            residual: terms_json(c.residual.iter().map(|(c, l)| (l, c))),
            sufficient_set: c.sufficient_set.iter().map(|s| permutation_json(s, t)).collect(),
        }
    }
}

/// Accepted by `lift --sufficient-set`: a bare list, or any object with a
/// `sufficient_set` field (such as a certificate written by `kernel`).
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum SufficientSetJson {
    List(Vec<PermutationJson>),
    Wrapped { sufficient_set: Vec<PermutationJson> },
}

impl SufficientSetJson {
    pub fn permutations(&self) -> Result<Vec<LabelPermutation>, CliError> {
        let list = match self {
            SufficientSetJson::List(l) | SufficientSetJson::Wrapped { sufficient_set: l } => l,
        };
        list.iter().map(permutation_from_json).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    pub elements: Vec<String>,
    pub less_than: Vec<(String, String)>,
}

impl PosetJson {
    pub fn from_poset(p: &Poset) -> Self {
        PosetJson {
            format: None,
            elements: p.elements().to_vec(),
            less_than: p.relations().into_iter().map(|(a, b)| (a.to_owned(), b.to_owned())).collect(),
        }
    }

    pub fn to_poset(&self) -> Result<Poset, CliError> {
        Ok(Poset::new(&self.elements, &self.less_than)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeafJson {
    pub coeff: String,
    pub poset: PosetJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepJson {
    pub poset: PosetJson,
    pub witness: [String; 4],
    pub v1: Vec<String>,
    pub v2: Vec<String>,
    pub swapped: bool,
    pub exhaustive: bool,
    pub coefficients: Vec<String>,
    pub children: Vec<PosetJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionJson {
    pub format: String,
    pub leaves: Vec<LeafJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceJson {
    pub format: String,
    pub steps: Vec<StepJson>,
}

pub fn reduction_json(r: &Reduction) -> (ReductionJson, TraceJson) {
    let leaves = r
        .leaves
        .iter()
        .map(|(c, p)| LeafJson { coeff: rational_to_string(c), poset: PosetJson::from_poset(p) })
        .collect();
    let steps = r
        .steps
        .iter()
        .map(|s| {
            let ids = |v: &[usize]| v.iter().map(|&i| s.poset.id(i).to_owned()).collect::<Vec<_>>();
            StepJson {
                poset: PosetJson::from_poset(&s.poset),
                witness: s.witness.map(|i| s.poset.id(i).to_owned()),
                v1: ids(&s.pair.v1),
                v2: ids(&s.pair.v2),
                swapped: s.swapped,
                exhaustive: s.pair.exhaustive,
                coefficients: s.coefficients.iter().map(rational_to_string).collect(),
                children: s.children.iter().map(PosetJson::from_poset).collect(),
            }
        })
        .collect();
    (ReductionJson { format: FORMAT.into(), leaves }, TraceJson { format: FORMAT.into(), steps })
}

/// Deserialize a file's contents, mapping failures to parse errors.
pub fn from_str<T: serde::de::DeserializeOwned>(what: &str, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(format!("{what}: {e}")))
}

/// Pretty JSON with a trailing newline.
pub fn to_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}
