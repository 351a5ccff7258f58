//! JSON file formats and the command implementations behind the `chromsym`
//! binary. Each command takes file contents and returns the stdout payload,
//! so everything here is testable without spawning a process.

pub mod io;

use chromsym_core::csf::{csf, Algorithm};
use chromsym_core::kernel::{self, check_lift_valid, lift, rewrite_to_r, LiftRoute};
use chromsym_core::multisym::Basis;
use chromsym_core::posets::gp_reduce;
use chromsym_core::{Error, Limits};
use serde::Serialize;

use io::{
    rational_to_string, CertificateJson, CombinationJson, GraphJson, MultiSymJson, PosetJson, SufficientSetJson,
    TermJson, FORMAT,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    /// 2 for unreadable or invalid input, 3 for a resource bound, 4 for a failed
    /// internal cross-check, 5 for a (3+1) in a poset.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::LimitExceeded { .. }) => 3,
            CliError::Core(Error::Inconsistent(_)) => 4,
            CliError::Core(Error::ContainsThreePlusOne(_)) => 5,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub fn compute(graph: &str, basis: Basis, algorithm: Algorithm, limits: &Limits) -> Result<String> {
    let g = io::from_str::<GraphJson>("graph", graph)?.to_graph()?;
    let f = csf(&g, algorithm, limits)?.to_basis(basis, limits)?;
    Ok(io::to_string(&MultiSymJson::from_multisym(&f)))
}

#[derive(Serialize)]
struct KernelVerdict {
    format: &'static str,
    member: bool,
    residual: MultiSymJson,
}

/// Returns the verdict payload and the certificate payload.
pub fn kernel(combo: &str, limits: &Limits) -> Result<(String, String)> {
    let l = io::from_str::<CombinationJson>("combination", combo)?.to_combination()?;
    let certificate = rewrite_to_r(&l, limits)?;
    let by_rewrite = certificate.residual_is_zero();
    let by_evaluation = kernel::evaluate(&l, Algorithm::Auto, limits)?.is_zero();
    if by_rewrite != by_evaluation {
        return Err(Error::Inconsistent(format!(
            "kernel membership routes disagree: evaluation says {by_evaluation}, rewriting says {by_rewrite}"
        ))
        .into());
    }
    let residual = MultiSymJson::from_multisym(&certificate.residual_r()?);
    let verdict = KernelVerdict { format: FORMAT, member: by_rewrite, residual: MultiSymJson { format: None, ..residual } };
    Ok((io::to_string(&verdict), io::to_string(&CertificateJson::from_certificate(&certificate))))
}

#[derive(Serialize)]
struct LiftVerdict {
    format: &'static str,
    combination: CombinationJson,
    valid: bool,
    route: &'static str,
    homogeneous: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    fixed_by_set: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    evaluates_to_zero: Option<bool>,
}

pub fn lift_command(combo: &str, augmentation: &str, sufficient_set: Option<&str>, limits: &Limits) -> Result<String> {
    let l = io::from_str::<CombinationJson>("combination", combo)?.to_combination()?;
    let h_star = io::from_str::<GraphJson>("augmentation", augmentation)?.to_graph()?;
    let set = sufficient_set
        .map(|s| io::from_str::<SufficientSetJson>("sufficient set", s)?.permutations())
        .transpose()?;
    let lifted = lift(&l, &h_star)?;
    let combination = CombinationJson::from_combination(&lifted);

    let homogeneous = kernel::lift_is_homogeneous(&l, &h_star)?;

    let direct = |homogeneous, fixed_by_set| -> Result<LiftVerdict> {
        let zero = kernel::evaluate(&lifted, Algorithm::Auto, limits)?.is_zero();
        Ok(LiftVerdict {
            format: FORMAT,
            combination: combination.clone(),
            valid: zero,
            route: "direct-evaluation",
            homogeneous,
            fixed_by_set,
            evaluates_to_zero: Some(zero),
        })
    };
    let verdict = if !homogeneous && set.is_none() {
        direct(false, None)?
    } else {
        let check = check_lift_valid(&l, &h_star, set.as_deref(), false, limits)?;
        let route = match check.route {
            LiftRoute::Homogeneous => "homogeneity",
            LiftRoute::FixedBySufficientSet => "fixed-by-S",
            LiftRoute::FixedByExtension(_) => "fixed-by-extension",
            LiftRoute::Moved(_) => return Ok(io::to_string(&direct(check.homogeneous, check.fixed_by_set)?)),
        };
        LiftVerdict {
            format: FORMAT,
            combination: combination.clone(),
            valid: check.valid,
            route,
            homogeneous: check.homogeneous,
            fixed_by_set: check.fixed_by_set,
            evaluates_to_zero: check.evaluates_to_zero,
        }
    };
    Ok(io::to_string(&verdict))
}

/// Returns the leaf payload and the step trace payload.
pub fn gp_reduce_command(poset: &str, limits: &Limits) -> Result<(String, String)> {
    let p = io::from_str::<PosetJson>("poset", poset)?.to_poset()?;
    let r = gp_reduce(&p, limits)?;
    let (leaves, trace) = io::reduction_json(&r);
    Ok((io::to_string(&leaves), io::to_string(&trace)))
}

#[derive(Serialize)]
struct EposVerdict {
    format: &'static str,
    positive: bool,
    witness: Option<TermJson>,
    expansion: MultiSymJson,
}

pub fn epos(graph: &str, limits: &Limits) -> Result<String> {
    let g = io::from_str::<GraphJson>("graph", graph)?.to_graph()?;
    let e = csf(&g, Algorithm::Auto, limits)?.is_e_positive(limits)?;
    let witness = e.witness.map(|(lambda, c)| TermJson {
        index: lambda.parts().iter().map(|t| t.entries().to_vec()).collect(),
        coeff: rational_to_string(&c),
    });
    let expansion = MultiSymJson { format: None, ..MultiSymJson::from_multisym(&e.expansion) };
    Ok(io::to_string(&EposVerdict { format: FORMAT, positive: e.positive, witness, expansion }))
}

pub fn basis_from_name(name: &str) -> Result<Basis> {
    Basis::from_name(name).ok_or_else(|| CliError::Parse(format!("unknown basis {name:?}")))
}
