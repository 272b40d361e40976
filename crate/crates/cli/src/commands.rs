//! One function per subcommand. Each loads its inputs, calls the library and
//! returns a [`Report`].

use std::path::Path;

use blockcoh::channels::{is_dephasing_covariant, KrausBlockMap, KrausChannel};
use blockcoh::conversion::{build_conversion_channel, necessity_certificate, verify_conversion, Route};
use blockcoh::kcoherence::{conjecture_probe, enumerate_structures, MAX_PROBE_DIM};
use blockcoh::measures::coherence_rank;
use blockcoh::powers::{PowerOptions, PowerResult};
use blockcoh::structure::{decompose, maximally_coherent_state, BlockOperator, BlockStructure, DensityMatrix};
use blockcoh::{c_entropy, c_l1, linalg, tol};
use serde_json::{json, Value};

use crate::doc;
use crate::error::CliError;
use crate::report::Report;

/// Sample count for the dephasing-covariance test in `check-channel`.
const COVARIANCE_SAMPLES: usize = 20;

fn with_structure(s: &BlockStructure) -> Report {
    let mut r = Report::new();
    r.extend(doc::structure_summary(s));
    r
}

pub fn measure(state: &Path, structure: &Path, density: bool) -> Result<Report, CliError> {
    let s = doc::structure(structure)?;
    let mut r = with_structure(&s);
    let rho = if density {
        DensityMatrix::new(doc::density(state)?)?
    } else {
        let psi = decompose(&doc::state(state)?, &s)?;
        r.push("weights", json!(psi.weights()));
        r.push("coherence_rank", coherence_rank(psi.amplitudes(), tol::RANK));
        psi.density()
    };
    r.push("c_l1", c_l1(&rho, &s)?);
    r.push("c_entropy", c_entropy(&rho, &s)?);
    Ok(r)
}

pub fn convert(from: &Path, to: &Path, structure: &Path, emit_kraus: Option<&Path>) -> Result<Report, CliError> {
    let s = doc::structure(structure)?;
    let src = decompose(&doc::state(from)?, &s)?;
    let dst = decompose(&doc::state(to)?, &s)?;
    let mut r = with_structure(&s);
    r.push("x_sq", json!(src.probabilities()));
    r.push("y_sq", json!(dst.probabilities()));
    let plan = build_conversion_channel(&src, &dst)?;
    r.push(
        "route",
        match plan.route {
            Route::Circulant => "circulant",
            Route::PermutationMixture => "permutation-mixture",
        },
    );
    if let Some(g) = &plan.gammas {
        for (i, v) in g.iter().enumerate() {
            r.push(format!("gamma_sq.{i}"), *v);
        }
    }
    r.push("kraus", plan.channel.kraus().len());
    let check = verify_conversion(&plan, &src, &dst)?;
    r.push("cptp_residual", check.cptp_residual);
    r.push("proportionality_residual", check.proportionality_residual);
    r.push("block_incoherent", check.block_incoherent);
    r.push("fidelity", check.fidelity);
    let cert = necessity_certificate(&plan.channel, &src, &dst)?;
    r.push("certificate.alpha_norm_sq", cert.alpha_norm_sq);
    r.push("certificate.stochastic_residual", cert.stochastic_residual);
    r.push("certificate.mixed", json!(cert.mixed));
    r.push("certificate.chain", cert.lower && cert.upper);
    if let Some(out) = emit_kraus {
        doc::write(out, &doc::channel_doc(plan.channel.kraus()))?;
        r.push("emitted", out.display().to_string());
    }
    Ok(r)
}

fn block_map_value(m: &KrausBlockMap) -> Value {
    match m {
        KrausBlockMap::Incoherent(map) => json!(map),
        KrausBlockMap::Violation { column, rows } => json!({ "column": column, "rows": rows }),
    }
}

pub fn check_channel(channel: &Path, structure: &Path) -> Result<Report, CliError> {
    let s = doc::structure(structure)?;
    let ch = KrausChannel::on(doc::channel(channel)?, &s)?;
    let mut r = with_structure(&s);
    r.push("kraus", ch.kraus().len());
    r.push("cptp_residual", ch.validate_cptp().residual);
    let verdict = ch.classify_block_incoherent();
    r.push("block_incoherent", verdict.is_block_incoherent);
    for (i, m) in verdict.per_kraus.iter().enumerate() {
        r.push(format!("block_map.{i}"), block_map_value(m));
    }
    if s.dim() == ch.output().dim() {
        r.push("dephasing_covariant", is_dephasing_covariant(&ch, &s, COVARIANCE_SAMPLES)?);
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Power {
    Cohering,
    Decohering,
}

fn power_report(r: &mut Report, res: &PowerResult) {
    r.push("value", res.value);
    if let Some(b) = res.block {
        r.push("block", b);
    }
    r.push(
        "method",
        match res.method {
            blockcoh::powers::PowerMethod::ClosedForm => "closed-form",
            blockcoh::powers::PowerMethod::Optimized => "optimized",
        },
    );
    let d = &res.diagnostics;
    r.push("restarts", d.restarts);
    r.push("best_restart", d.best_restart);
    if d.second_best.is_finite() {
        r.push("second_best", d.second_best);
    }
    r.push("gap", d.gap);
    r.push("evaluations", d.evaluations);
}

/// Single unitary Kraus operators use the dedicated unitary formulas.
pub fn power(which: Power, channel: &Path, structure: &Path, opts: &PowerOptions) -> Result<Report, CliError> {
    let s = doc::structure(structure)?;
    let ch = KrausChannel::on(doc::channel(channel)?, &s)?;
    let mut r = with_structure(&s);
    let unitary = match ch.kraus() {
        [u] if linalg::unitarity_residual(u) <= tol::VALIDITY => Some(BlockOperator::new(u.clone(), s.clone())?),
        _ => None,
    };
    let res = match (which, unitary) {
        (Power::Cohering, Some(u)) => blockcoh::bcp_unitary(&u, opts)?,
        (Power::Cohering, None) => blockcoh::bcp(&ch, &s, opts)?,
        (Power::Decohering, Some(u)) => blockcoh::bdp_unitary(&u, opts)?,
        (Power::Decohering, None) => blockcoh::bdp(&ch, &s, opts)?,
    };
    power_report(&mut r, &res);
    Ok(r)
}

pub fn gate(unitary: &Path, structure: &Path, state: &Path) -> Result<Report, CliError> {
    let s = doc::structure(structure)?;
    let u = BlockOperator::new(doc::unitary(unitary)?, s.clone())?;
    let psi = decompose(&doc::state(state)?, &s)?;
    let p = blockcoh::build_gate_protocol(&u)?;
    let (sys, anc) = blockcoh::run_gate_protocol(&p, &psi)?;
    let target = u.matrix() * psi.amplitudes();
    let before = maximally_coherent_state(&s, None)?.density();
    let mut r = with_structure(&s);
    r.push("kraus", p.channel.kraus().len());
    r.push("completion", p.has_completion);
    r.push("cptp_residual", p.channel.validate_cptp().residual);
    r.push("block_incoherent", p.channel.classify_block_incoherent().is_block_incoherent);
    r.push("fidelity", sys.fidelity_with_pure(&target));
    r.push("system_purity", sys.purity());
    r.push("ancilla_c_l1_before", c_l1(&before, &s)?);
    r.push("ancilla_c_l1_after", c_l1(&anc, &s)?);
    Ok(r)
}

/// Structures are listed only when there are at most this many.
const LISTED_STRUCTURES: usize = 32;

pub fn kcoh(d: usize, k: usize, trials: Option<usize>, seed: u64) -> Result<Report, CliError> {
    let fam = enumerate_structures(d, k)?;
    let mut r = Report::new();
    r.push("d", d);
    r.push("k", k);
    r.push("structures", fam.structures.len());
    if fam.structures.len() <= LISTED_STRUCTURES {
        for (i, s) in fam.structures.iter().enumerate() {
            r.push(format!("structure.{i}"), json!(s.groups()));
        }
    }
    let trials = trials.unwrap_or(if d <= MAX_PROBE_DIM { 500 } else { 0 });
    if trials > 0 {
        let p = conjecture_probe(d, k, trials, seed)?;
        r.push("probe.trials", p.trials);
        r.push("probe.seed", seed);
        r.push("probe.certified", p.certified);
        r.push("probe.certificate_violations", p.certificate_violations);
        r.push("probe.contained", p.contained);
        r.push("probe.containment_violations", p.containment_violations);
    }
    Ok(r)
}
