//! The `versality` command line: one subcommand per operation, a report on
//! standard output, and exit code 0 (success), 1 (mathematical failure) or 2
//! (bad input).

pub mod build;
pub mod format;
pub mod report;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::ainf::{
    ainf_mc_residual, bc_category, check_ainf, check_functor, solve_bounding_cochain, BcOutcome,
    CurvedCategory, CurvedFunctor,
};
use crate::coefficients::{
    cone_completion, is_strongly_convex, lambda_point_specialize, large_volume_specialize,
    LocalRing, SeriesElement,
};
use crate::error::Error;
use crate::graded::{check_symmetry, GradedBasis, MultilinearOperation, MAX_ARITY};
use crate::hochschild::{
    deformation_to_mc, family_ks_map, hh_cohomology, mc_to_deformation, versal_extension,
    DeformationFamily, HochschildCochain,
};
use crate::linalg::Matrix;
use crate::linf::{
    check_linf_relations, check_morphism, classify_mc, gauge_equivalent, gauge_flow,
    kodaira_spencer, mc_residual, minimal_model, versal_presentation, versality_verdict,
    GaugeOutcome, RelationReport,
};
use crate::scalar::Scalar;
use crate::Rational;
use format::{DescriptionFile, Payload};
pub use report::{Caps, Line, Report};

type Q = Rational;

pub const DEFAULT_ARITY: usize = 6;
pub const DEFAULT_ORDER: u32 = 8;
pub const DEFAULT_LENGTH_CAP: usize = 4;
const MAX_FILE_BYTES: u64 = 4 << 20;

#[derive(Parser, Debug)]
#[command(
    name = "versality",
    version,
    about = "Exact deformation theory of L-infinity and A-infinity structures"
)]
pub struct Cli {
    /// Machine-readable JSON report.
    #[arg(long, global = true)]
    json: bool,
    /// Directory that relative input paths are resolved against.
    #[arg(long, global = true)]
    fixture_dir: Option<PathBuf>,
    /// Truncation order.
    #[arg(long, short = 'n', global = true)]
    order: Option<u32>,
    /// Arity bound for relation checks and transfers.
    #[arg(long, global = true)]
    arity: Option<usize>,
    /// Length cap for Hochschild cochains.
    #[arg(long, global = true)]
    length_cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// L-infinity relations and symmetry of an algebra.
    CheckLinf { file: PathBuf },
    /// A-infinity relations of a (curved) category.
    CheckAinf { file: PathBuf },
    /// Functor equations.
    CheckFunctor { file: PathBuf },
    /// Maurer-Cartan residual of an element.
    McResidual { file: PathBuf },
    /// Flow along the gauge path of an element, and/or search a gauge to its target.
    Gauge { file: PathBuf },
    /// Minimal model by homotopy transfer, with certification.
    MinimalModel { file: PathBuf },
    /// Versal presentation (through the minimal model if needed).
    Versal { file: PathBuf },
    /// Kodaira-Spencer map of a Maurer-Cartan element or of a deformation.
    Ks { file: PathBuf },
    /// Classifying map from the versal presentation.
    Classify { file: PathBuf },
    /// Versal / complete verdict from the Kodaira-Spencer rank.
    Verdict { file: PathBuf },
    /// Hochschild cohomology of an uncurved ground-field category.
    Hochschild {
        file: PathBuf,
        #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
        degree: i32,
        /// Leave out length-zero cochains.
        #[arg(long)]
        truncated: bool,
    },
    /// Maurer-Cartan cochain of a deformation.
    DeformToMc { file: PathBuf },
    /// Deformation from a Maurer-Cartan cochain.
    McToDeform { file: PathBuf },
    /// Classifying map and functor from a versal family to a deformation.
    VersalExtend {
        family: PathBuf,
        target: PathBuf,
        /// Isomorphism from the reduction of the target to the reduction of the family.
        #[arg(long)]
        iso: Option<PathBuf>,
    },
    /// Bounding cochain of one object.
    BcSolve {
        file: PathBuf,
        #[arg(long)]
        object: Option<String>,
    },
    /// Bounding-cochain category on the given objects.
    BcBuild {
        file: PathBuf,
        /// Comma separated; all objects by default.
        #[arg(long)]
        objects: Option<String>,
    },
    /// Strong convexity and completion of a cone.
    Cone { file: PathBuf },
    /// Specialization of an element of a cone completion.
    Specialize {
        file: PathBuf,
        /// Areas on generators, `name:value,...`.
        #[arg(long)]
        omega: Option<String>,
        /// B-field on generators, `name:value,...`.
        #[arg(long)]
        b: Option<String>,
        /// A point file instead of --omega/--b.
        #[arg(long)]
        point: Option<PathBuf>,
        #[arg(long)]
        cutoff: Option<String>,
        /// Element text; defaults to the one in the cone file.
        #[arg(long)]
        element: Option<String>,
        #[arg(long)]
        large_volume: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CheckLinf { .. } => "check-linf",
            Command::CheckAinf { .. } => "check-ainf",
            Command::CheckFunctor { .. } => "check-functor",
            Command::McResidual { .. } => "mc-residual",
            Command::Gauge { .. } => "gauge",
            Command::MinimalModel { .. } => "minimal-model",
            Command::Versal { .. } => "versal",
            Command::Ks { .. } => "ks",
            Command::Classify { .. } => "classify",
            Command::Verdict { .. } => "verdict",
            Command::Hochschild { .. } => "hochschild",
            Command::DeformToMc { .. } => "deform-to-mc",
            Command::McToDeform { .. } => "mc-to-deform",
            Command::VersalExtend { .. } => "versal-extend",
            Command::BcSolve { .. } => "bc-solve",
            Command::BcBuild { .. } => "bc-build",
            Command::Cone { .. } => "cone",
            Command::Specialize { .. } => "specialize",
        }
    }
}

/// Printed text and exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

enum Failure {
    Input(String),
    Math(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotMaurerCartan(_)
            | Error::ObstructionMismatch(_)
            | Error::ObstructionEscapes { .. }
            | Error::KsNotSurjective(_)
            | Error::DifferentialNotSquareZero(_)
            | Error::PushforwardNotBounding(_)
            | Error::OrderOnePartNotClosed(_)
            | Error::NotStronglyConvex => Failure::Math(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<format::FormatError> for Failure {
    fn from(e: format::FormatError) -> Self {
        Failure::Input(e.to_string())
    }
}

type Step<T> = std::result::Result<T, Failure>;

/// Runs the command line on `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return Outcome {
                stdout: e.render().to_string(),
                code,
            };
        }
    };
    let name = cli.command.name();
    let (report, code) = match dispatch(&cli) {
        Ok((r, passed)) => (r, if passed { 0 } else { 1 }),
        Err(f) => {
            let mut r = Report::new(name);
            let (verdict, code, msg) = match f {
                Failure::Input(m) => ("input error", 2, m),
                Failure::Math(m) => ("failure", 1, m),
            };
            r.verdict = verdict.into();
            r.finding("error", msg);
            (r, code)
        }
    };
    let stdout = if cli.json {
        report.to_json()
    } else {
        report.to_text()
    };
    Outcome { stdout, code }
}

struct Ctx<'a> {
    cli: &'a Cli,
}

impl Ctx<'_> {
    fn path(&self, p: &Path) -> PathBuf {
        match &self.cli.fixture_dir {
            Some(d) if p.is_relative() => d.join(p),
            _ => p.to_path_buf(),
        }
    }

    fn load(&self, p: &Path) -> Step<DescriptionFile> {
        let path = self.path(p);
        let meta = std::fs::metadata(&path)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        if meta.len() > MAX_FILE_BYTES {
            return Err(Failure::Input(format!(
                "{}: file larger than {MAX_FILE_BYTES} bytes",
                path.display()
            )));
        }
        let bytes =
            std::fs::read(&path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        Ok(format::parse(&bytes)?)
    }

    fn arity(&self) -> Step<usize> {
        let a = self.cli.arity.unwrap_or(DEFAULT_ARITY);
        if a == 0 || a > MAX_ARITY {
            return Err(Failure::Input(format!(
                "--arity must be between 1 and {MAX_ARITY}"
            )));
        }
        Ok(a)
    }

    fn length_cap(&self) -> Step<usize> {
        let c = self.cli.length_cap.unwrap_or(DEFAULT_LENGTH_CAP);
        if c == 0 || c > MAX_ARITY {
            return Err(Failure::Input(format!(
                "--length-cap must be between 1 and {MAX_ARITY}"
            )));
        }
        Ok(c)
    }

    fn order(&self) -> u32 {
        self.cli.order.unwrap_or(DEFAULT_ORDER)
    }
}

fn wrong_kind(file: &DescriptionFile, expected: &str) -> Failure {
    Failure::Input(format!(
        "expected a `{expected}` file, got `{}`",
        file.payload.kind()
    ))
}

macro_rules! expect_kind {
    ($file:expr, $variant:ident, $name:literal) => {
        match &$file.payload {
            Payload::$variant(p) => p,
            _ => return Err(wrong_kind(&$file, $name)),
        }
    };
}

fn dispatch(cli: &Cli) -> Step<(Report, bool)> {
    let ctx = Ctx { cli };
    let mut r = Report::new(cli.command.name());
    let passed = match &cli.command {
        Command::CheckLinf { file } => check_linf_cmd(&ctx, file, &mut r)?,
        Command::CheckAinf { file } => {
            let f = ctx.load(file)?;
            let a = build::category(expect_kind!(f, Ainf, "ainf"))?;
            let arity = ctx.arity()?;
            r.caps.arity = Some(arity);
            r.caps.truncation = truncation_of(a.ring());
            relation_report(&mut r, &check_ainf(&a, arity)?)
        }
        Command::CheckFunctor { file } => {
            let f = ctx.load(file)?;
            let fun = build::functor(expect_kind!(f, Functor, "functor"))?;
            let arity = ctx.arity()?;
            r.caps.arity = Some(arity);
            r.caps.truncation = truncation_of(fun.source().ring());
            relation_report(&mut r, &check_functor(&fun, arity)?)
        }
        Command::McResidual { file } => {
            let f = ctx.load(file)?;
            let d = build::mc(expect_kind!(f, Mc, "mc"))?;
            r.caps.truncation = Some(d.ring.truncation());
            let res = mc_residual(&d.algebra, &d.value)?;
            for (i, c) in res.terms() {
                r.finding(
                    format!("residual at {}", d.algebra.basis().name(*i)),
                    c.to_text(),
                );
            }
            let ok = res.is_zero();
            r.verdict = if ok {
                "maurer-cartan"
            } else {
                "not maurer-cartan"
            }
            .into();
            ok
        }
        Command::Gauge { file } => gauge_cmd(&ctx, file, &mut r)?,
        Command::MinimalModel { file } => minimal_model_cmd(&ctx, file, &mut r)?,
        Command::Versal { file } => {
            let f = ctx.load(file)?;
            let g = build::linf(expect_kind!(f, Linf, "linf"))?;
            let order = ctx.order();
            r.caps.truncation = Some(order);
            let h = if g.is_minimal() {
                g
            } else {
                let arity = ctx.arity()?;
                r.caps.arity = Some(arity);
                minimal_model(&g, arity)?.algebra
            };
            let vp = versal_presentation(&h, order)?;
            for (x, &i) in vp.variables.iter().zip(&vp.h1) {
                r.datum(
                    format!("variable {x}"),
                    format!("dual to {}", h.basis().name(i)),
                );
            }
            for (j, (p, &t)) in vp
                .obstructions
                .iter()
                .zip(&vp.obstruction_targets)
                .enumerate()
            {
                r.datum(
                    format!("P{}", j + 1),
                    format!(
                        "{} (coefficient of {})",
                        p.to_text(),
                        h.basis().name(vp.h2[t])
                    ),
                );
            }
            r.datum("tautological element", vp.tautological.to_text(h.basis()));
            r.verdict = if vp.obstructions.is_empty() {
                "unobstructed"
            } else {
                "obstructed"
            }
            .into();
            true
        }
        Command::Ks { file } => ks_cmd(&ctx, file, &mut r)?,
        Command::Classify { file } => {
            let f = ctx.load(file)?;
            let d = build::mc(expect_kind!(f, Mc, "mc"))?;
            let arity = ctx.arity()?;
            r.caps.arity = Some(arity);
            r.caps.truncation = Some(d.ring.truncation());
            let model = minimal_model(&d.algebra, arity)?;
            let vp = versal_presentation(&model.algebra, d.ring.truncation())?;
            let c = classify_mc(&d.algebra, &model, &vp, &d.value)?;
            for (j, p) in vp.obstructions.iter().enumerate() {
                r.datum(format!("P{}", j + 1), p.to_text());
            }
            for (x, image) in c.map.describe() {
                r.datum(format!("psi({x})"), image);
            }
            for (k, p) in c.paths.iter().enumerate() {
                for (j, g) in p.components.iter().enumerate() {
                    r.datum(
                        format!("gauge {} t^{j}", k + 1),
                        g.to_text(d.algebra.basis()),
                    );
                }
            }
            r.verdict = "classified".into();
            true
        }
        Command::Verdict { file } => {
            let f = ctx.load(file)?;
            let d = build::mc(expect_kind!(f, Mc, "mc"))?;
            r.caps.truncation = Some(d.ring.truncation());
            let v = versality_verdict(&d.algebra, &d.value)?;
            r.datum("rank", v.rank.to_string());
            r.datum("dim H1", v.h1_dim.to_string());
            r.datum("parameters", v.ks.columns.join(", "));
            matrix_lines(&mut r, "KS", &v.ks.matrix);
            r.verdict = v.kind.as_str().into();
            true
        }
        Command::Hochschild {
            file,
            degree,
            truncated,
        } => {
            let f = ctx.load(file)?;
            let a = build::category(expect_kind!(f, Ainf, "ainf"))?;
            let cap = ctx.length_cap()?;
            r.caps.length_cap = Some(cap);
            let hh = hh_cohomology(&a, *degree, cap, *truncated)?;
            r.datum(format!("dim HH^{degree}"), hh.dim().to_string());
            for (k, rep) in hh.representatives().iter().enumerate() {
                for l in cochain_lines(&a, rep) {
                    r.datum(format!("class {} {}", k + 1, l.location), l.value);
                }
            }
            r.verdict = format!("dimension {}", hh.dim());
            true
        }
        Command::DeformToMc { file } => {
            let f = ctx.load(file)?;
            let total = build::category(expect_kind!(f, Ainf, "ainf"))?;
            r.caps.truncation = Some(total.ring().truncation());
            let family = DeformationFamily::new(total.clone(), total.reduce_mod_max_ideal())?;
            let alpha = deformation_to_mc(&family)?;
            for l in cochain_lines(&total, &alpha) {
                r.data.push(l);
            }
            r.verdict = "maurer-cartan".into();
            true
        }
        Command::McToDeform { file } => {
            let f = ctx.load(file)?;
            let d = build::cochain(expect_kind!(f, Cochain, "cochain"))?;
            let arity = ctx.arity()?;
            r.caps.arity = Some(arity);
            r.caps.truncation = Some(d.ring.truncation());
            let family = mc_to_deformation(&d.category, &d.ring, &d.cochain)?;
            structure_lines(&mut r, &family.total);
            let ok = relation_report(&mut r, &check_ainf(&family.total, arity)?);
            r.verdict = if ok { "deformation" } else { "fail" }.into();
            ok
        }
        Command::VersalExtend {
            family,
            target,
            iso,
        } => versal_extend_cmd(&ctx, family, target, iso.as_deref(), &mut r)?,
        Command::BcSolve { file, object } => {
            let f = ctx.load(file)?;
            let a = build::category(expect_kind!(f, Ainf, "ainf"))?;
            let obj = match object {
                Some(o) => a.object_index(o)?,
                None if a.objects().len() == 1 => 0,
                None => {
                    return Err(Failure::Input(
                        "--object is required with several objects".into(),
                    ))
                }
            };
            let order = ctx.cli.order.unwrap_or(a.ring().truncation());
            r.caps.truncation = Some(order);
            match solve_bounding_cochain(&a, obj, order)? {
                BcOutcome::Solved(c) => {
                    r.datum(
                        format!("alpha({})", a.objects()[obj]),
                        c.value.to_text(a.basis()),
                    );
                    let res = ainf_mc_residual(&a, obj, &c.value)?;
                    r.datum("residual", res.to_text(a.basis()));
                    r.verdict = "solved".into();
                    res.is_zero()
                }
                BcOutcome::Obstructed {
                    order,
                    monomial,
                    class,
                    not_closed,
                } => {
                    obstructed(
                        &mut r,
                        &a.objects()[obj],
                        order,
                        &monomial,
                        &class,
                        not_closed,
                    );
                    false
                }
            }
        }
        Command::BcBuild { file, objects } => bc_build_cmd(&ctx, file, objects.as_deref(), &mut r)?,
        Command::Cone { file } => {
            let f = ctx.load(file)?;
            let c = build::cone(expect_kind!(f, Cone, "cone"))?;
            if !is_strongly_convex(&c) {
                r.verdict = "not strongly convex".into();
                r.finding("cone", "contains a line");
                false
            } else {
                let order = ctx.order();
                r.caps.truncation = Some(order);
                let ring = cone_completion::<Q>(&c, order)?;
                for v in ring.variables() {
                    r.datum(
                        format!("variable {}", v.name),
                        format!("weight {}", v.weight),
                    );
                }
                for (j, t) in ring.relation_texts().into_iter().enumerate() {
                    r.datum(format!("relation {}", j + 1), t);
                }
                r.verdict = "strongly convex".into();
                true
            }
        }
        Command::Specialize {
            file,
            omega,
            b,
            point,
            cutoff,
            element,
            large_volume,
        } => {
            let f = ctx.load(file)?;
            let spec = expect_kind!(f, Cone, "cone");
            let c = build::cone(spec)?;
            let order = ctx.order();
            r.caps.truncation = Some(order);
            let ring = cone_completion::<Q>(&c, order)?;
            let text = element
                .as_deref()
                .or(spec.element.as_deref())
                .ok_or_else(|| Failure::Input("no element given (--element)".into()))?;
            let elem = SeriesElement::parse(&ring, text)?;
            r.datum("element", elem.to_text());
            if *large_volume {
                r.datum("large volume", large_volume_specialize(&elem).to_text());
            } else {
                let p = match (point, omega) {
                    (Some(pf), None) => {
                        let pf = ctx.load(pf)?;
                        build::point(&c, expect_kind!(pf, Point, "point"))?
                    }
                    (None, Some(om)) => {
                        let spec = format::PointSpec {
                            omega: build::assignments(om)?,
                            b_field: build::assignments(b.as_deref().unwrap_or(""))?,
                        };
                        build::point(&c, &spec)?
                    }
                    _ => {
                        return Err(Failure::Input(
                            "give exactly one of --point and --omega".into(),
                        ))
                    }
                };
                let cutoff = build::rational(
                    cutoff
                        .as_deref()
                        .ok_or_else(|| Failure::Input("--cutoff is required".into()))?,
                )?;
                let v = lambda_point_specialize(&elem, &c, &p, &cutoff)?;
                r.datum("cutoff", crate::scalar::rational_text(v.cutoff()));
                r.datum("value", v.to_text());
            }
            r.verdict = "specialized".into();
            true
        }
    };
    Ok((r, passed))
}

/// Ground-field structures carry no truncation.
fn truncation_of(ring: &LocalRing<Q>) -> Option<u32> {
    (ring.nvars() > 0).then(|| ring.truncation())
}

fn tuple_names(basis: &GradedBasis, t: &[usize]) -> String {
    let names: Vec<&str> = t.iter().map(|&i| basis.name(i)).collect();
    format!("({})", names.join(", "))
}

fn relation_report(r: &mut Report, rep: &RelationReport) -> bool {
    for f in &rep.findings {
        r.finding(f.location.clone(), f.detail.clone());
    }
    if !rep.unchecked.is_empty() {
        let list: Vec<String> = rep.unchecked.iter().map(usize::to_string).collect();
        r.datum("unchecked arities", list.join(", "));
    }
    let ok = rep.passed();
    if r.verdict.is_empty() {
        r.verdict = if ok { "pass" } else { "fail" }.into();
    }
    ok
}

fn matrix_lines(r: &mut Report, name: &str, m: &Matrix<Q>) {
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(Scalar::to_text).collect();
        r.datum(
            format!("{name} row {}", i + 1),
            format!("[{}]", row.join(", ")),
        );
    }
}

fn op_lines(
    out: &mut Vec<Line>,
    name: &str,
    s: usize,
    op: &MultilinearOperation<Q>,
    input: &GradedBasis,
    output: &GradedBasis,
) {
    for (t, v) in op.entries() {
        if !v.is_zero() {
            out.push(Line {
                location: format!("{name}{s}{}", tuple_names(input, t)),
                value: v.to_text(output),
            });
        }
    }
}

fn cochain_lines(a: &CurvedCategory<Q>, phi: &HochschildCochain<Q>) -> Vec<Line> {
    let mut out = Vec::new();
    for (o, v) in &phi.zeroth {
        out.push(Line {
            location: format!("phi0({})", a.objects()[*o]),
            value: v.to_text(a.basis()),
        });
    }
    for (s, op) in &phi.components {
        op_lines(&mut out, "phi", *s, op, a.basis(), a.basis());
    }
    out
}

fn structure_lines(r: &mut Report, a: &CurvedCategory<Q>) {
    for (o, v) in a.curvature() {
        r.datum(format!("mu0({})", a.objects()[*o]), v.to_text(a.basis()));
    }
    for (s, op) in a.mu() {
        op_lines(&mut r.data, "mu", *s, op, a.basis(), a.basis());
    }
}

fn obstructed(
    r: &mut Report,
    object: &str,
    order: u32,
    monomial: &str,
    class: &[Q],
    not_closed: bool,
) {
    let class: Vec<String> = class.iter().map(Scalar::to_text).collect();
    let mut text = format!(
        "order {order}, monomial {monomial}, class [{}]",
        class.join(", ")
    );
    if not_closed {
        text += ", not closed";
    }
    r.finding(format!("obstruction at {object}"), text);
    r.verdict = "obstructed".into();
}

fn check_linf_cmd(ctx: &Ctx, file: &Path, r: &mut Report) -> Step<bool> {
    let f = ctx.load(file)?;
    let g = build::linf(expect_kind!(f, Linf, "linf"))?;
    let arity = ctx.arity()?;
    r.caps.arity = Some(arity);
    for (s, op) in g.brackets() {
        for v in check_symmetry(op, g.basis()) {
            r.finding(
                format!("symmetry of l{s} at {}", tuple_names(g.basis(), &v.tuple)),
                v.detail,
            );
        }
    }
    let symmetric = r.findings.is_empty();
    Ok(relation_report(r, &check_linf_relations(&g, arity)?) && symmetric)
}

fn gauge_cmd(ctx: &Ctx, file: &Path, r: &mut Report) -> Step<bool> {
    let f = ctx.load(file)?;
    let d = build::mc(expect_kind!(f, Mc, "mc"))?;
    r.caps.truncation = Some(d.ring.truncation());
    if d.gamma.is_none() && d.target.is_none() {
        return Err(Failure::Input(
            "an mc file for `gauge` needs `gamma`, `target` or both".into(),
        ));
    }
    let basis = d.algebra.basis();
    let mut start = d.value.clone();
    if let Some(path) = &d.gamma {
        start = gauge_flow(&d.algebra, path, &d.value)?;
        r.datum("flowed", start.to_text(basis));
        let res = mc_residual(&d.algebra, &start)?;
        r.datum("residual after flow", res.to_text(basis));
        r.verdict = "flowed".into();
        if !res.is_zero() {
            r.finding("residual after flow", res.to_text(basis));
            return Ok(false);
        }
    }
    if let Some(target) = &d.target {
        match gauge_equivalent(&d.algebra, &start, target)? {
            GaugeOutcome::Equivalent(paths) => {
                for (k, p) in paths.iter().enumerate() {
                    for (j, g) in p.components.iter().enumerate() {
                        r.datum(format!("gauge {} t^{j}", k + 1), g.to_text(basis));
                    }
                }
                r.verdict = "equivalent".into();
            }
            GaugeOutcome::NotEquivalent(o) => {
                let class: Vec<String> = o.class.iter().map(Scalar::to_text).collect();
                let mut text = format!(
                    "order {}, monomial {}, class [{}]",
                    o.order,
                    o.monomial,
                    class.join(", ")
                );
                if o.not_closed {
                    text += ", not closed";
                }
                r.finding("obstruction", text);
                r.verdict = "not equivalent".into();
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn minimal_model_cmd(ctx: &Ctx, file: &Path, r: &mut Report) -> Step<bool> {
    let f = ctx.load(file)?;
    let g = build::linf(expect_kind!(f, Linf, "linf"))?;
    let arity = ctx.arity()?;
    r.caps.arity = Some(arity);
    let mm = minimal_model(&g, arity)?;
    let h = &mm.algebra;
    for i in 0..h.basis().len() {
        r.datum(
            format!("basis {}", h.basis().name(i)),
            format!("degree {}", h.basis().degree(i)),
        );
    }
    for (s, op) in h.brackets() {
        op_lines(&mut r.data, "l", *s, op, h.basis(), h.basis());
    }
    for (s, op) in &mm.morphism.components {
        op_lines(&mut r.data, "f", *s, op, h.basis(), g.basis());
    }
    let own = check_linf_relations(h, arity)?;
    let morphism = check_morphism(&mm.morphism, h, &g, arity)?;
    for f in own.findings.iter().chain(&morphism.findings) {
        r.finding(f.location.clone(), f.detail.clone());
    }
    let ok = own.passed() && morphism.passed() && h.is_minimal();
    r.verdict = if ok { "certified" } else { "fail" }.into();
    Ok(ok)
}

fn ks_cmd(ctx: &Ctx, file: &Path, r: &mut Report) -> Step<bool> {
    let f = ctx.load(file)?;
    match &f.payload {
        Payload::Mc(spec) => {
            let d = build::mc(spec)?;
            r.caps.truncation = Some(d.ring.truncation());
            let ks = kodaira_spencer(&d.algebra, &d.value)?;
            r.datum("parameters", ks.columns.join(", "));
            r.datum("dim H1", ks.matrix.rows().to_string());
            matrix_lines(r, "KS", &ks.matrix);
            r.verdict = format!("rank {}", ks.rank());
        }
        Payload::Ainf(spec) => {
            let total = build::category(spec)?;
            let cap = ctx.length_cap()?;
            r.caps.length_cap = Some(cap);
            r.caps.truncation = Some(total.ring().truncation());
            let family = DeformationFamily::new(total.clone(), total.reduce_mod_max_ideal())?;
            let ks = family_ks_map(&family, cap)?;
            r.datum("parameters", ks.columns.join(", "));
            r.datum("dim HH2", ks.hh2_dim.to_string());
            r.datum("surjective", ks.surjective.to_string());
            r.datum("injective", ks.injective.to_string());
            matrix_lines(r, "KS", &ks.matrix);
            r.verdict = format!("rank {}", ks.rank);
        }
        _ => return Err(wrong_kind(&f, "mc` or `ainf")),
    }
    Ok(true)
}

fn versal_extend_cmd(
    ctx: &Ctx,
    family: &Path,
    target: &Path,
    iso: Option<&Path>,
    r: &mut Report,
) -> Step<bool> {
    let bf = ctx.load(family)?;
    let b = build::category(expect_kind!(bf, Ainf, "ainf"))?;
    let af = ctx.load(target)?;
    let a = build::category(expect_kind!(af, Ainf, "ainf"))?;
    let cap = ctx.length_cap()?;
    let order = ctx.cli.order.unwrap_or(a.ring().truncation());
    r.caps.length_cap = Some(cap);
    r.caps.truncation = Some(order);
    let bfam = DeformationFamily::new(b.clone(), b.reduce_mod_max_ideal())?;
    let iso: CurvedFunctor<Q> = match iso {
        Some(p) => {
            let f = ctx.load(p)?;
            build::functor(expect_kind!(f, Functor, "functor"))?
        }
        None => {
            let a0 = a.reduce_mod_max_ideal();
            let id = CurvedFunctor::identity(&a0);
            CurvedFunctor::new(
                a0,
                bfam.reduction.clone(),
                id.object_map().to_vec(),
                id.components().clone(),
                Default::default(),
            )?
        }
    };
    let ext = versal_extension(&bfam, &a, &iso, cap, order)?;
    for (x, image) in ext.map.describe() {
        r.datum(format!("psi({x})"), image);
    }
    r.datum("ks rank", ext.report.ks.rank.to_string());
    r.datum("dim HH2", ext.report.ks.hh2_dim.to_string());
    let checked = relation_report(r, &ext.report.functor_check);
    for f in &ext.report.embedding.failures {
        r.finding(f.location.clone(), f.detail.clone());
    }
    r.datum(
        "embedding pairs checked mod m",
        ext.report.embedding.pairs_checked.to_string(),
    );
    let ok = checked && ext.report.embedding.passed();
    r.verdict = if ok { "extended" } else { "fail" }.into();
    Ok(ok)
}

fn bc_build_cmd(ctx: &Ctx, file: &Path, objects: Option<&str>, r: &mut Report) -> Step<bool> {
    let f = ctx.load(file)?;
    let a = build::category(expect_kind!(f, Ainf, "ainf"))?;
    let arity = ctx.arity()?;
    let order = ctx.cli.order.unwrap_or(a.ring().truncation());
    r.caps.arity = Some(arity);
    r.caps.truncation = Some(order);
    let chosen: Vec<usize> = match objects {
        Some(list) => list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|o| a.object_index(o))
            .collect::<crate::Result<_>>()?,
        None => (0..a.objects().len()).collect(),
    };
    let mut sels = Vec::new();
    for &obj in &chosen {
        match solve_bounding_cochain(&a, obj, order)? {
            BcOutcome::Solved(c) => {
                r.datum(
                    format!("alpha({})", a.objects()[obj]),
                    c.value.to_text(a.basis()),
                );
                sels.push(c);
            }
            BcOutcome::Obstructed {
                order,
                monomial,
                class,
                not_closed,
            } => {
                obstructed(r, &a.objects()[obj], order, &monomial, &class, not_closed);
                return Ok(false);
            }
        }
    }
    let abc = bc_category(&a, &sels)?;
    r.datum(
        "curvature",
        if abc.curvature().is_empty() {
            "0"
        } else {
            "nonzero"
        },
    );
    structure_lines(r, &abc);
    let ok = relation_report(r, &check_ainf(&abc, arity)?) && abc.curvature().is_empty();
    r.verdict = if ok { "built" } else { "fail" }.into();
    Ok(ok)
}
