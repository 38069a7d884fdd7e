//! One function per subcommand: build the inputs, run the engine, print a
//! summary and write the artifacts.

use std::sync::Arc;

use serde::Serialize;

use frobcoh::bar::{reduced_bar, AugmentedAlgebra, BarIdentities};
use frobcoh::complexes::SpectralSequence;
use frobcoh::functor::{functor_power, Base, FunctorKind};
use frobcoh::hochschild::hs_model;
use frobcoh::hopf::{kernel_tower_map, make_kernel, quotient_group, Comodule, Family, FiniteHopf, RationalRep};
use frobcoh::ring::{
    cohomology_groups, exp_alpha_restrict, fg_probe, noetherian_probe, restricted_powers, restriction_map, witt_class,
    CoefficientAlgebra, PowerCheck, Verdict,
};
use frobcoh::{Budget, Error, Field, SparseMatrix, SparseVec};

use crate::output::{join, poincare, write_json, write_series, Header};
use crate::{CoeffArg, FamilyArg, JobArgs};

pub enum JobError {
    Engine(Error),
    Io(std::io::Error),
}

impl From<Error> for JobError {
    fn from(e: Error) -> Self {
        JobError::Engine(e)
    }
}

impl From<std::io::Error> for JobError {
    fn from(e: std::io::Error) -> Self {
        JobError::Io(e)
    }
}

type JobResult = Result<(), JobError>;

fn invalid(msg: impl Into<String>) -> JobError {
    JobError::Engine(Error::Invalid(msg.into()))
}

fn validate(a: &JobArgs) -> Result<(), JobError> {
    Field::new(a.p)?;
    if a.window == 0 {
        return Err(invalid("the window must be at least 1"));
    }
    if a.r == 0 {
        return Err(invalid("the kernel height r must be at least 1"));
    }
    if a.family == FamilyArg::Gl && a.n == 0 {
        return Err(invalid("GL_n needs n >= 1"));
    }
    let gl_only = matches!(a.coeff, CoeffArg::GlAdjoint | CoeffArg::GammaM | CoeffArg::SymM);
    if gl_only && a.family != FamilyArg::Gl {
        return Err(invalid("gl-adjoint, gamma-m and sym-m coefficients need --family gl"));
    }
    Ok(())
}

fn family(a: &JobArgs) -> Family {
    match a.family {
        FamilyArg::Ga => Family::Ga,
        FamilyArg::Gl => Family::Gl { n: a.n },
    }
}

fn group_name(a: &JobArgs, r: u32) -> String {
    match a.family {
        FamilyArg::Ga => format!("(G_a)_{r}"),
        FamilyArg::Gl => format!("(GL_{})_{r}", a.n),
    }
}

fn coeff_name(a: &JobArgs) -> String {
    match a.coeff {
        CoeffArg::Trivial => "trivial".into(),
        CoeffArg::Regular => "regular".into(),
        CoeffArg::GlAdjoint => "gl-adjoint".into(),
        CoeffArg::GammaM => format!("gamma-{}", a.m),
        CoeffArg::SymM => format!("sym-{}", a.m),
    }
}

fn coefficient(a: &JobArgs, h: &Arc<FiniteHopf>, budget: &Budget) -> Result<Comodule, JobError> {
    let natural = |kind: FunctorKind| -> Result<Comodule, JobError> {
        let power = functor_power(kind, &Base::Rational(RationalRep::standard(a.n, a.p)), a.m, budget)?;
        let rep = power
            .rational
            .ok_or_else(|| JobError::Engine(Error::Invariant("functor lost its representation".into())))?;
        Ok(rep.restrict_to_kernel(a.r, budget)?)
    };
    match a.coeff {
        CoeffArg::Trivial => Ok(Comodule::trivial(h.clone(), 1)),
        CoeffArg::Regular => Ok(Comodule::regular(h.clone())),
        CoeffArg::GlAdjoint => Ok(RationalRep::adjoint(a.n, a.p).restrict_to_kernel(a.r, budget)?),
        CoeffArg::GammaM => natural(FunctorKind::Gamma),
        CoeffArg::SymM => natural(FunctorKind::Sym),
    }
}

fn algebra(a: &JobArgs, h: &Arc<FiniteHopf>) -> Result<CoefficientAlgebra, JobError> {
    match a.coeff {
        CoeffArg::Trivial => Ok(CoefficientAlgebra::trivial(h.clone())),
        CoeffArg::Regular => Ok(CoefficientAlgebra::regular(h.clone())?),
        _ => Err(invalid(
            "ring tables need a commutative coefficient algebra: trivial or regular",
        )),
    }
}

fn finish<T: Serialize>(a: &JobArgs, header: &Header, report: &T, series: Option<&[usize]>) -> JobResult {
    if let Some(path) = &a.out {
        write_json(path, header, report)?;
    }
    if let (Some(path), Some(dims)) = (&a.csv, series) {
        write_series(path, dims)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct CocycleDump {
    degree: usize,
    /// Sparse `(index, value)` pairs; index `m · dim(k[L])^n + Σ b_k dim(k[L])^{n-k}`.
    classes: Vec<SparseVec>,
}

#[derive(Serialize)]
struct CohomologyReport {
    group: String,
    coefficient: String,
    coefficient_dim: usize,
    hopf_dim: usize,
    dims: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cocycles: Option<Vec<CocycleDump>>,
}

pub fn cohomology(a: &JobArgs) -> JobResult {
    validate(a)?;
    let budget = a.budget();
    let h = make_kernel(family(a), a.p, a.r, &budget)?;
    let m = coefficient(a, &h, &budget)?;
    let c = cohomology_groups(&m, a.window, &budget)?;
    let dims = c.dims();
    let cocycles = a.cocycles.then(|| {
        (0..=a.window)
            .map(|n| CocycleDump {
                degree: n,
                classes: c
                    .representatives(n)
                    .unwrap_or(&[])
                    .iter()
                    .map(|u| u.value.clone())
                    .collect(),
            })
            .collect()
    });
    let report = CohomologyReport {
        group: group_name(a, a.r),
        coefficient: coeff_name(a),
        coefficient_dim: m.dim(),
        hopf_dim: h.dim(),
        dims: dims.clone(),
        cocycles,
    };
    println!("H^n({}, {}) for n = 0..{}", report.group, report.coefficient, a.window);
    println!("dims: {}", join(&dims));
    println!("Poincaré series: {}", poincare(&dims));
    finish(a, &Header::new("cohomology", a), &report, Some(&dims))
}

#[derive(Serialize)]
struct Product {
    i: usize,
    a: usize,
    j: usize,
    b: usize,
    value: SparseVec,
}

#[derive(Serialize)]
struct RingReport {
    group: String,
    coefficient: String,
    dims: Vec<usize>,
    generators: Vec<usize>,
    verdict: Verdict,
    /// Nonzero products of basis classes, `i ≤ j`.
    products: Vec<Product>,
}

pub fn ring(a: &JobArgs) -> JobResult {
    validate(a)?;
    let budget = a.budget();
    let h = make_kernel(family(a), a.p, a.r, &budget)?;
    let alg = algebra(a, &h)?;
    let c = cohomology_groups(&alg.comodule, a.window, &budget)?;
    let t = c.ring_table(&alg)?;
    t.check_graded_commutative()?;
    t.check_associative()?;
    let fg = fg_probe(&t, a.window, a.window)?;
    let mut products = Vec::new();
    for i in 0..=a.window {
        for j in i..=a.window - i {
            for x in 0..t.dims[i] {
                for y in 0..t.dims[j] {
                    let value = t.product(i, x, j, y);
                    if !value.is_empty() {
                        products.push(Product {
                            i,
                            a: x,
                            j,
                            b: y,
                            value: value.clone(),
                        });
                    }
                }
            }
        }
    }
    let report = RingReport {
        group: group_name(a, a.r),
        coefficient: coeff_name(a),
        dims: t.dims.clone(),
        generators: fg.generator_degrees.clone(),
        verdict: fg.verdict.clone(),
        products,
    };
    println!(
        "H^*({}, {}) through degree {}",
        report.group, report.coefficient, a.window
    );
    println!("dims: {}", join(&report.dims));
    println!("generator degrees: {}", join(&report.generators));
    println!("generation: {}", verdict_text(&report.verdict));
    println!("nonzero basis products: {}", report.products.len());
    finish(a, &Header::new("ring", a), &report, Some(&report.dims))
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Generated { d0 } => format!("generated in degrees <= {d0}"),
        Verdict::NotGeneratedBelow { window } => format!("not generated below {window}"),
    }
}

#[derive(Serialize)]
struct Page {
    r: usize,
    entries: Vec<(usize, usize, usize)>,
    stabilized: bool,
}

#[derive(Serialize)]
struct HsReport {
    group: String,
    normal: String,
    coefficient: String,
    pages: Vec<Page>,
    e_infinity: Vec<(usize, usize, usize)>,
    e_infinity_totals: Vec<usize>,
    tot_dims: Vec<usize>,
    direct_dims: Vec<usize>,
    stabilized_at: Option<usize>,
    agrees: bool,
}

pub fn hs_ss(a: &JobArgs) -> JobResult {
    validate(a)?;
    let budget = a.budget();
    let s = a.normal.unwrap_or(a.r - 1);
    if s > a.r {
        return Err(invalid(format!("normal height {s} exceeds r = {}", a.r)));
    }
    let q = quotient_group(family(a), a.p, a.r, s, &budget)?;
    let coeff = match a.coeff {
        CoeffArg::Trivial => Comodule::trivial(q.whole.clone(), 1),
        CoeffArg::Regular => Comodule::regular(q.whole.clone()),
        _ => return Err(invalid("hs-ss supports trivial and regular coefficients")),
    };
    let model = hs_model(&q, &coeff, a.window, true, None, &budget)?;
    let ss: SpectralSequence = model.spectral_sequence(a.window + 2)?;
    let direct = cohomology_groups(&coeff, a.window, &budget)?.dims();
    let totals: Vec<usize> = (0..=a.window).map(|n| ss.e_infinity_total(n)).collect();
    let agrees = totals == direct && ss.converges();
    let report = HsReport {
        group: group_name(a, a.r),
        normal: group_name(a, s),
        coefficient: coeff_name(a),
        pages: ss
            .pages
            .iter()
            .map(|pg| Page {
                r: pg.r,
                entries: pg.entries.clone(),
                stabilized: pg.stabilized,
            })
            .collect(),
        e_infinity: ss.e_infinity.clone(),
        e_infinity_totals: totals.clone(),
        tot_dims: ss.tot_dims.clone(),
        direct_dims: direct.clone(),
        stabilized_at: ss.stabilized_at,
        agrees,
    };
    println!(
        "Hochschild–Serre for {} over {}, coefficient {}",
        report.group, report.normal, report.coefficient
    );
    println!("E_inf totals: {}", join(&totals));
    println!("direct dims:  {}", join(&direct));
    match ss.stabilized_at {
        Some(r) => println!("stable from page {r} within the window"),
        None => println!("stabilization not certified within the window"),
    }
    finish(a, &Header::new("hs-ss", a), &report, Some(&direct))?;
    if !agrees {
        return Err(JobError::Engine(Error::Invariant(
            "E_inf totals differ from the direct computation".into(),
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct Certificate {
    /// `ρ(c)` as monomials in the `X_ij` over `det^den`; invariance means
    /// this equals `c ⊗ det^den / det^den`.
    den: u32,
    terms: Vec<(Vec<u32>, SparseVec)>,
    invariant: bool,
}

#[derive(Serialize)]
struct Restriction {
    alpha: Vec<Vec<u32>>,
    /// Per coefficient slot `E_ab`, the coordinate on the generator of H^2((G_a)_1, k).
    coordinates: Vec<Vec<u32>>,
    scalar: Option<u32>,
    powers: Vec<PowerCheck>,
}

#[derive(Serialize)]
struct WittReport {
    h2_dim: usize,
    invariant_dim: usize,
    class: SparseVec,
    invariant_basis: Vec<SparseVec>,
    certificate: Certificate,
    restriction: Restriction,
    passed: bool,
}

pub fn witt(a: &JobArgs) -> JobResult {
    Field::new(a.p)?;
    if a.n < 2 {
        return Err(invalid("the Witt class needs n >= 2"));
    }
    let budget = a.budget();
    let w = witt_class(a.n, a.p, &budget)?;
    w.verify()?;
    let image = w.coaction.image_of(&w.coordinates);
    let certificate = Certificate {
        den: image.den,
        terms: image.terms.iter().map(|(m, v)| (m.clone(), v.clone())).collect(),
        invariant: w.coaction.is_invariant(&w.coordinates),
    };
    let mut alpha = vec![vec![0u32; a.n]; a.n];
    alpha[0][1] = 1;
    let r = exp_alpha_restrict(&w.class, &alpha, &budget)?;
    let scalar = r.scalar_against(&r.twisted_alpha());
    let powers = if scalar.is_some() {
        restricted_powers(&r, 3, &budget)?
    } else {
        Vec::new()
    };
    let passed = certificate.invariant && scalar.is_some() && powers.iter().all(PowerCheck::passed);
    let report = WittReport {
        h2_dim: w.h2_dim,
        invariant_dim: w.invariant_dim(),
        class: w.coordinates.clone(),
        invariant_basis: w.invariant_basis.clone(),
        certificate,
        restriction: Restriction {
            alpha,
            coordinates: r.coordinates.clone(),
            scalar,
            powers,
        },
        passed,
    };
    println!("H^2((GL_{})_1, gl^(1)) at p = {}: dim {}", a.n, a.p, report.h2_dim);
    println!("conjugation-invariant classes: dim {}", report.invariant_dim);
    println!("class coordinates: {:?}", report.class);
    match scalar {
        Some(s) => println!("restriction along exp(t E_12): {s} · x_1 ⊗ E_12"),
        None => println!("restriction along exp(t E_12) is not a nonzero multiple of x_1 ⊗ E_12"),
    }
    for pc in &report.restriction.powers {
        println!(
            "cup power m = {}: {}",
            pc.m,
            if pc.passed() { "matches x_1^m" } else { "MISMATCH" }
        );
    }
    finish(a, &Header::new("witt", a), &report, None)?;
    if !passed {
        return Err(JobError::Engine(Error::Invariant(
            "Witt-class verification failed".into(),
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct BarReport {
    algebra: String,
    dims: Vec<usize>,
    /// `[length][internal degree]`.
    homology: Vec<Vec<usize>>,
    homology_by_length: Vec<usize>,
    identities: BarIdentities,
}

pub fn bar_check(a: &JobArgs) -> JobResult {
    Field::new(a.p)?;
    if a.window == 0 || a.n < 1 || a.degree == 0 {
        return Err(invalid("bar-check needs window >= 1, n >= 1 and degree >= 1"));
    }
    let budget = a.budget();
    let alg = AugmentedAlgebra::truncated_polynomial(a.p, a.n, a.degree)?;
    let bar = reduced_bar(&alg, a.window as u32, &budget)?;
    let identities = bar.check_identities()?;
    let report = BarReport {
        algebra: format!("k[x]/x^{} with |x| = {}", a.n, a.degree),
        dims: (0..=bar.max_length()).map(|s| bar.dim(s)).collect(),
        homology: bar.homology_dims(),
        homology_by_length: bar.homology_by_length(),
        identities,
    };
    println!(
        "reduced bar construction of {} through internal degree {}",
        report.algebra, a.window
    );
    println!("homology by length: {}", join(&report.homology_by_length));
    println!(
        "identities hold on {} pairs, {} triples, {} words",
        report.identities.pairs, report.identities.triples, report.identities.words
    );
    finish(
        a,
        &Header::new("bar-check", a),
        &report,
        Some(&report.homology_by_length),
    )
}

#[derive(Serialize)]
struct ProbeLine {
    window: usize,
    verdict: Verdict,
}

#[derive(Serialize)]
struct ProbeReport {
    group: String,
    dims: Vec<usize>,
    fg: Vec<ProbeLine>,
    #[serde(skip_serializing_if = "Option::is_none")]
    restriction_target: Option<String>,
    noetherian: Vec<ProbeLine>,
    monotone: bool,
}

fn monotone(lines: &[ProbeLine]) -> bool {
    let bound = |l: &ProbeLine| l.verdict.d0().unwrap_or(l.window);
    lines.windows(2).all(|w| bound(&w[1]) >= bound(&w[0]))
}

pub fn probes(a: &JobArgs) -> JobResult {
    validate(a)?;
    let budget = a.budget();
    let fam = family(a);
    let h = make_kernel(fam, a.p, a.r, &budget)?;
    let k = Comodule::trivial(h.clone(), 1);
    let c = cohomology_groups(&k, a.window, &budget)?;
    let t = c.ring_table(&CoefficientAlgebra::trivial(h))?;
    let fg = (1..=a.window)
        .map(|d| {
            Ok(ProbeLine {
                window: d,
                verdict: fg_probe(&t, d, d)?.verdict,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let sub = match a.normal {
        Some(s) if s >= a.r => {
            return Err(invalid(format!(
                "restriction target height {s} must be below r = {}",
                a.r
            )))
        }
        Some(s) => Some(s),
        None if a.r > 1 => Some(a.r - 1),
        None => None,
    };
    let mut noetherian = Vec::new();
    if let Some(s) = sub {
        let map = kernel_tower_map(fam, a.p, a.r, s, &budget)?;
        let target = cohomology_groups(&Comodule::trivial(map.target.clone(), 1), a.window, &budget)?;
        let tt = target.ring_table(&CoefficientAlgebra::trivial(map.target.clone()))?;
        let f = restriction_map(&c, &target, &map, &SparseMatrix::identity(a.p, 1))?;
        f.check_multiplicative(&t, &tt)?;
        for d in 1..=a.window {
            noetherian.push(ProbeLine {
                window: d,
                verdict: noetherian_probe(&f, &t, &tt, d, d)?.verdict,
            });
        }
    }
    let report = ProbeReport {
        group: group_name(a, a.r),
        dims: t.dims.clone(),
        monotone: monotone(&fg) && monotone(&noetherian),
        fg,
        restriction_target: sub.map(|s| group_name(a, s)),
        noetherian,
    };
    println!("probes for H^*({}, k) through degree {}", report.group, a.window);
    for l in &report.fg {
        println!("fg D = {}: {}", l.window, verdict_text(&l.verdict));
    }
    if let Some(tgt) = &report.restriction_target {
        for l in &report.noetherian {
            println!(
                "restriction to {tgt}, D = {}: module {}",
                l.window,
                verdict_text(&l.verdict)
            );
        }
    }
    println!("monotone in D: {}", report.monotone);
    finish(a, &Header::new("probes", a), &report, Some(&report.dims))?;
    if !report.monotone {
        return Err(JobError::Engine(Error::Invariant(
            "probe verdicts decrease with the window".into(),
        )));
    }
    Ok(())
}
