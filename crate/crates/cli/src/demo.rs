//! Worked examples with known values, tabulated as pass/fail checks.

use blockcoh::linalg::{c64, CMatrix};
use blockcoh::powers::{bcp_random_unitary, PowerOptions, UnitaryMixtureTerm};
use blockcoh::structure::{decompose, maximally_coherent_state, BlockOperator, BlockStructure};
use blockcoh::{c_entropy, c_l1, random, CVector, C64};
use serde_json::{json, Value};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub expected: f64,
    pub tol: f64,
}

impl Check {
    fn new(name: impl Into<String>, value: f64, expected: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            value,
            expected,
            tol,
        }
    }

    pub fn passed(&self) -> bool {
        (self.value - self.expected).abs() <= self.tol
    }
}

/// `[[aI, bV], [−b̄V†, āI]]` on blocks of size `n = dim V`.
fn two_block_unitary(a: C64, b: C64, v: &CMatrix) -> Result<BlockOperator, CliError> {
    let n = v.nrows();
    let i = CMatrix::identity(n, n);
    let mut u = CMatrix::zeros(2 * n, 2 * n);
    u.view_mut((0, 0), (n, n)).copy_from(&(&i * a));
    u.view_mut((0, n), (n, n)).copy_from(&(v * b));
    u.view_mut((n, 0), (n, n)).copy_from(&(v.adjoint() * (-b.conj())));
    u.view_mut((n, n), (n, n)).copy_from(&(&i * a.conj()));
    Ok(BlockOperator::new(u, BlockStructure::contiguous(&[n, n])?)?)
}

fn state(s: &BlockStructure, probs: &[f64]) -> Result<blockcoh::PureBlockState, CliError> {
    let mut v = CVector::zeros(s.dim());
    for (mu, p) in probs.iter().enumerate() {
        v += s.uniform_component(mu) * c64(p.sqrt(), 0.0);
    }
    Ok(decompose(&v, s)?)
}

pub fn run(seed: u64, restarts: usize) -> Result<Vec<Check>, CliError> {
    let mut rng = random::rng(seed);
    let opts = PowerOptions {
        restarts,
        seed,
        ..PowerOptions::default()
    };
    let mut checks = Vec::new();

    for m in 2..=4 {
        let s = BlockStructure::contiguous(&vec![2; m])?;
        let mc = maximally_coherent_state(&s, None)?.density();
        let expected = (m - 1) as f64;
        checks.push(Check::new(format!("C_l1(MC, M={m}) = {expected}"), c_l1(&mc, &s)?, expected, 1e-9));
    }
    let s = BlockStructure::contiguous(&[1, 2, 3, 2])?;
    let mc = maximally_coherent_state(&s, None)?.density();
    checks.push(Check::new("C_s(MC, M=4) = 2", c_entropy(&mc, &s)?, 2.0, 1e-9));

    let h = c64(0.5f64.sqrt(), 0.0);
    let (a, b) = (c64(3f64.sqrt() / 2.0, 0.0), c64(0.5, 0.0));
    let v = random::haar_unitary(&mut rng, 2);
    let hadamard = two_block_unitary(h, h, &v)?;
    let family = two_block_unitary(a, b, &v)?;
    let two_ab = 2.0 * a.norm() * b.norm();

    checks.push(Check::new("BCP(H) = 1", blockcoh::bcp_unitary(&hadamard, &opts)?.value, 1.0, 1e-6));
    checks.push(Check::new(
        "BCP(a=sqrt(3)/2, b=1/2) = 2|ab|",
        blockcoh::bcp_unitary(&family, &opts)?.value,
        two_ab,
        1e-6,
    ));

    let p = 0.3;
    let qubit = CMatrix::from_row_slice(2, 2, &[a, b, -b.conj(), a.conj()]);
    let terms = [
        UnitaryMixtureTerm {
            p: 1.0 - p,
            u: CMatrix::identity(2, 2),
            v: CMatrix::identity(2, 2),
        },
        UnitaryMixtureTerm {
            p,
            u: qubit,
            v: random::haar_unitary(&mut rng, 2),
        },
    ];
    checks.push(Check::new(
        "BCP(two-qubit mixture, p=0.3) = 2p|ab|",
        bcp_random_unitary(&terms, &opts)?.value,
        p * two_ab,
        1e-6,
    ));

    checks.push(Check::new("BDP(H) = 1", blockcoh::bdp_unitary(&hadamard, &opts)?.value, 1.0, 1e-6));
    checks.push(Check::new(
        "BDP(a=sqrt(3)/2, b=1/2) = 1 - sqrt(1 - 4|ab|^2)",
        blockcoh::bdp_unitary(&family, &opts)?.value,
        1.0 - (1.0 - two_ab * two_ab).sqrt(),
        1e-6,
    ));

    let s = BlockStructure::contiguous(&[2, 2])?;
    let (src, dst) = (state(&s, &[0.5, 0.5])?, state(&s, &[0.7, 0.3])?);
    let plan = blockcoh::build_conversion_channel(&src, &dst)?;
    let fidelity = blockcoh::conversion::verify_conversion(&plan, &src, &dst)?.fidelity;
    checks.push(Check::new("F(convert (1/2,1/2) -> (0.7,0.3)) = 1", fidelity, 1.0, 1e-9));

    let s = BlockStructure::contiguous(&[2, 1, 2])?;
    let u = BlockOperator::new(random::haar_unitary(&mut rng, s.dim()), s.clone())?;
    let psi = decompose(&random::unit_vector(&mut rng, s.dim()), &s)?;
    let protocol = blockcoh::build_gate_protocol(&u)?;
    let (sys, anc) = blockcoh::run_gate_protocol(&protocol, &psi)?;
    checks.push(Check::new(
        "F(gate protocol, M=3) = 1",
        sys.fidelity_with_pure(&(u.matrix() * psi.amplitudes())),
        1.0,
        1e-8,
    ));
    checks.push(Check::new("C_l1(ancilla after gate) = 0", c_l1(&anc, &s)?, 0.0, 1e-8));

    let fam = blockcoh::kcoherence::enumerate_structures(4, 2)?;
    checks.push(Check::new("#structures(d=4, k=2) = 10", fam.structures.len() as f64, 10.0, 0.0));
    Ok(checks)
}

pub fn render(checks: &[Check], json: bool) -> String {
    if json {
        let rows: Vec<Value> = checks
            .iter()
            .map(|c| {
                json!({
                    "check": c.name,
                    "value": c.value,
                    "expected": c.expected,
                    "tol": c.tol,
                    "pass": c.passed(),
                })
            })
            .collect();
        let mut out = serde_json::to_string_pretty(&Value::Array(rows)).expect("tables serialize");
        out.push('\n');
        return out;
    }
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for c in checks {
        out.push_str(&format!(
            "{:<width$}  value={:<22} tol={:<6e} {}\n",
            c.name,
            format!("{:.12}", c.value),
            c.tol,
            if c.passed() { "PASS" } else { "FAIL" },
        ));
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    out.push_str(&format!("passed={} failed={}\n", checks.len() - failed, failed));
    out
}
