//! Subcommand implementations. Each writes its full output to `out`.

use std::io::Write;
use std::ops::ControlFlow;
use std::path::Path;

use num_bigint::BigUint;
use powerfree_core::bounds::{
    brinkhuis_bound, lower_bound_from_morphism, reference_constants, verify_brinkhuis,
    BrinkhuisCandidate, BrinkhuisVerdict, EntropyBound, Provenance,
};
use powerfree_core::enumerator::{
    count_powerfree, distribution_stats, entropy_upper_from_count, fixture_counts,
    fixture_joint_n80, letter_count_range, letter_histogram, max_length_within_budget,
    parse_counts_csv, parse_joint_csv, variance_slope, CountTable, EnumerationConfig,
    JointCountTable, Source,
};
use powerfree_core::genfun::{
    all_poles, dominant_growth, dominant_pole, exact_generating_function, known_degree_bound,
    series_coefficients, RationalFunction, TransferSystem, EXACT_DEFAULT_MAX_P,
};
use powerfree_core::morphism::{
    search_bean_generating_sets, search_uniform_generating_sets, verify_powerfree, Morphism,
    MorphismFile, RwTestSet, SearchOptions, Verification, VerificationMethod, Visitor,
};
use powerfree_core::{Alphabet, Error, FreenessSpec, Word};
use serde_json::{json, Value};

use crate::output::{json_text, real_json, Cell, Format, Table};
use crate::{
    BoundsArgs, BrinkhuisArgs, Command, CountArgs, DistArgs, DistOutput, Exact, FreqArgs,
    GenfunArgs, HpArgs, LanguageName, PolesArgs, Run, SearchArgs, TestsetArgs, VerifyArgs,
};

pub enum Failure {
    /// Bad invocation: exit status 2.
    Usage(String),
    /// The computation failed: exit status 1.
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

pub fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Count(a) => count(a, out),
        Command::Dist(a) => dist(a, out),
        Command::Genfun(a) => genfun(a, out),
        Command::Hp(a) => hp(a, out),
        Command::Poles(a) => poles(a, out),
        Command::VerifyMorphism(a) => verify(a, out),
        Command::SearchMorphisms(a) => search(a, out),
        Command::Testset(a) => testset(a, out),
        Command::Bounds(a) => bounds(a, out),
        Command::Freq(a) => freq(a, out),
        Command::Brinkhuis(a) => brinkhuis(a, out),
    }
}

impl Run {
    fn config(&self) -> EnumerationConfig {
        let mut c = EnumerationConfig::default();
        if let Some(w) = self.workers {
            c.workers = w.max(1);
        }
        if let Some(b) = self.budget {
            c.node_budget = b;
        }
        c
    }

    /// Sizes the global pool used by the parallel library routines.
    fn install_pool(&self) {
        if let Some(w) = self.workers {
            // Fails only when a pool already exists, which is harmless.
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build_global();
        }
    }

    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn load_morphism(path: &Path) -> Result<(Morphism, Option<u32>), Failure> {
    let file = MorphismFile::parse(&read(path)?)?;
    Ok((file.morphism()?, file.k))
}

fn spec(k: u32, p: Option<usize>) -> Result<FreenessSpec, Failure> {
    Ok(match p {
        Some(p) => FreenessSpec::with_period_cap(k, p)?,
        None => FreenessSpec::new(k)?,
    })
}

fn is_binary_cubefree(spec: FreenessSpec, alphabet: Alphabet, n_max: usize) -> bool {
    spec.k() == 3
        && alphabet == Alphabet::BINARY
        && spec.period_cap().is_none_or(|p| p >= n_max / 3)
}

/// `c(n)` for `n = 0..=max_n`: enumerated as far as the budget allows, then
/// taken from a fixture.
fn counts_with_fixture(
    spec: FreenessSpec,
    alphabet: Alphabet,
    max_n: usize,
    config: &EnumerationConfig,
    fixture: Option<&Path>,
) -> Result<Vec<(BigUint, Source)>, Failure> {
    let n_enum = max_length_within_budget(spec, alphabet, max_n, config)?;
    let table = count_powerfree(spec, alphabet, n_enum, config)?;
    let mut rows: Vec<(BigUint, Source)> = table
        .counts()
        .iter()
        .map(|c| (c.clone(), table.source()))
        .collect();
    if n_enum == max_n {
        return Ok(rows);
    }
    let reference = count_fixture(spec, alphabet, max_n, config, fixture)?;
    for (n, (c, _)) in rows.iter().enumerate() {
        if reference.get(n) != Some(c) {
            return Err(Failure::Domain(format!(
                "fixture disagrees with enumeration at n = {n}"
            )));
        }
    }
    rows.extend((n_enum + 1..=max_n).map(|n| (reference.counts()[n].clone(), Source::Fixture)));
    Ok(rows)
}

/// `c(n)` alone: enumerated when the budget allows, else from a fixture.
fn count_at(
    spec: FreenessSpec,
    alphabet: Alphabet,
    n: usize,
    config: &EnumerationConfig,
    fixture: Option<&Path>,
) -> Result<(BigUint, Source), Failure> {
    if max_length_within_budget(spec, alphabet, n, config)? == n {
        let table = count_powerfree(spec, alphabet, n, config)?;
        return Ok((table.counts()[n].clone(), table.source()));
    }
    let reference = count_fixture(spec, alphabet, n, config, fixture)?;
    Ok((reference.counts()[n].clone(), Source::Fixture))
}

/// A count table reaching `max_n` from `fixture` or the bundled data.
fn count_fixture(
    spec: FreenessSpec,
    alphabet: Alphabet,
    max_n: usize,
    config: &EnumerationConfig,
    fixture: Option<&Path>,
) -> Result<CountTable, Failure> {
    let reference = match fixture {
        Some(path) => parse_counts_csv(&read(path)?, spec, alphabet, Source::Fixture)?,
        None if is_binary_cubefree(spec, alphabet, max_n) => fixture_counts(),
        // Reproduces the enumerator's budget error.
        None => {
            count_powerfree(spec, alphabet, max_n, config)?;
            unreachable!("enumeration beyond the budget succeeded");
        }
    };
    if reference.max_n() < max_n {
        return Err(Failure::Domain(format!(
            "length {max_n} exceeds the node budget and the fixture stops at n = {}",
            reference.max_n()
        )));
    }
    Ok(reference)
}

fn count(a: CountArgs, out: &mut dyn Write) -> Outcome {
    a.run.install_pool();
    let alphabet = Alphabet::new(a.lang.alphabet)?;
    let spec = spec(a.lang.k, a.p)?;
    let rows = counts_with_fixture(
        spec,
        alphabet,
        a.max_n,
        &a.run.config(),
        a.fixture.as_deref(),
    )?;
    let tagged = rows.iter().any(|(_, s)| *s == Source::Fixture);
    let mut t = Table::new(if tagged {
        &["n", "count", "source"]
    } else {
        &["n", "count"]
    });
    for (n, (c, s)) in rows.into_iter().enumerate() {
        let mut row = vec![Cell::int(n), Cell::int(c)];
        if tagged {
            row.push(Cell::text(s.label()));
        }
        t.push(row);
    }
    write!(out, "{}", t.render(a.run.format_or(Format::Csv)))?;
    Ok(())
}

fn dist(a: DistArgs, out: &mut dyn Write) -> Outcome {
    a.run.install_pool();
    let lengths: Vec<usize> = match (a.n, a.n_min, a.n_max) {
        (Some(n), _, _) => vec![n],
        (None, lo, Some(hi)) => (lo.unwrap_or(1)..=hi).collect(),
        _ => return Err(Failure::Usage("give --n or --n-max".into())),
    };
    if lengths.is_empty() {
        return Err(Failure::Usage("empty length range".into()));
    }
    let spec = spec(a.k, None)?;
    let config = a.run.config();
    let n_hi = *lengths.iter().max().expect("nonempty");
    let n_enum = max_length_within_budget(spec, Alphabet::BINARY, n_hi, &config)?;
    let fresh_hi = lengths.iter().copied().filter(|&n| n <= n_enum).max();
    let hist = match fresh_hi {
        Some(n) => Some(letter_histogram(spec, Alphabet::BINARY, n, &config)?),
        None => None,
    };
    let mut fixture: Option<JointCountTable> = None;
    let mut tables = Vec::new();
    for &n in &lengths {
        if let Some(h) = hist.as_ref().filter(|_| n <= n_enum) {
            tables.push(h.joint(n)?);
            continue;
        }
        if fixture.is_none() {
            fixture = Some(match &a.fixture {
                Some(path) => parse_joint_csv(&read(path)?, Source::Fixture)?,
                None if a.k == 3 => fixture_joint_n80(),
                None => {
                    count_powerfree(spec, Alphabet::BINARY, n, &config)?;
                    unreachable!("enumeration beyond the budget succeeded");
                }
            });
        }
        let f = fixture.as_ref().expect("loaded");
        if f.n() != n {
            return Err(Failure::Domain(format!(
                "length {n} exceeds the node budget (about {n_enum}) and the fixture holds only n = {}",
                f.n()
            )));
        }
        tables.push(f.clone());
    }
    let tagged = tables.iter().any(|t| t.source() == Source::Fixture);
    let with_source = |header: &[&'static str]| -> Table {
        let mut h = header.to_vec();
        if tagged {
            h.push("source");
        }
        Table::new(&h)
    };
    let source = |t: &JointCountTable, row: &mut Vec<Cell>| {
        if tagged {
            row.push(Cell::text(t.source().label()));
        }
    };
    let mut t;
    match a.output {
        DistOutput::Joint => {
            t = with_source(&["n", "n0", "count"]);
            for j in &tables {
                for (n0, c) in j.counts().iter().enumerate() {
                    let mut row = vec![Cell::int(j.n()), Cell::int(n0), Cell::int(c)];
                    source(j, &mut row);
                    t.push(row);
                }
            }
        }
        DistOutput::Stats => {
            t = with_source(&["n", "variance", "min", "max"]);
            for j in &tables {
                let s = distribution_stats(j)?;
                let mut row = vec![
                    Cell::int(s.n),
                    Cell::Real(s.variance),
                    Cell::int(s.min_count),
                    Cell::int(s.max_count),
                ];
                source(j, &mut row);
                t.push(row);
            }
        }
        DistOutput::Scaled => {
            let single = tables.len() == 1;
            t = with_source(if single {
                &["x", "g"]
            } else {
                &["n", "x", "g"]
            });
            for j in &tables {
                let s = distribution_stats(j)?;
                for &(x, g) in &s.scaled_points {
                    let mut row = if single { vec![] } else { vec![Cell::int(s.n)] };
                    row.extend([Cell::Real(x), Cell::Real(g)]);
                    source(j, &mut row);
                    t.push(row);
                }
            }
        }
        DistOutput::Gaussian => {
            t = with_source(&["n", "e", "p", "gaussian"]);
            for j in &tables {
                let s = distribution_stats(j)?;
                for (e, p, g) in s.gaussian_comparison() {
                    let mut row = vec![Cell::int(s.n), Cell::Real(e), Cell::Real(p), Cell::Real(g)];
                    source(j, &mut row);
                    t.push(row);
                }
            }
        }
        DistOutput::Slope => {
            let stats = tables
                .iter()
                .map(distribution_stats)
                .collect::<Result<Vec<_>, _>>()?;
            t = Table::new(&["n_min", "n_max", "slope"]);
            t.push(vec![
                Cell::int(lengths[0]),
                Cell::int(n_hi),
                Cell::Real(variance_slope(&stats)?),
            ]);
        }
    }
    write!(out, "{}", t.render(a.run.format_or(Format::Csv)))?;
    Ok(())
}

fn exact(ts: &TransferSystem, opts: &Exact) -> Result<RationalFunction, Failure> {
    let p = ts.p();
    if p > EXACT_DEFAULT_MAX_P && !opts.force {
        return Err(Failure::Domain(format!(
            "exact generating function for p = {p} exceeds the default limit p <= \
             {EXACT_DEFAULT_MAX_P}; pass --force to run it anyway"
        )));
    }
    let bound = opts
        .degree_bound
        .or_else(|| known_degree_bound(ts.k(), p, ts.alphabet()))
        .unwrap_or(ts.state_count() + ts.state_len());
    Ok(exact_generating_function(ts, bound)?)
}

fn coefficients_json(rf: &RationalFunction) -> Value {
    let list = |p: &powerfree_core::Polynomial| -> Vec<String> {
        p.coefficients().iter().map(ToString::to_string).collect()
    };
    let (dn, dd) = rf.degrees();
    json!({"num": list(rf.num()), "den": list(rf.den()), "d_num": dn, "d_den": dd})
}

fn genfun(a: GenfunArgs, out: &mut dyn Write) -> Outcome {
    a.run.install_pool();
    let ts = TransferSystem::build(a.lang.k, a.p, Alphabet::new(a.lang.alphabet)?)?;
    let format = a.run.format_or(Format::Csv);
    if !a.exact {
        let table = series_coefficients(&ts, a.max_n);
        let mut t = Table::new(&["n", "count"]);
        for (n, c) in table.counts().iter().enumerate() {
            t.push(vec![Cell::int(n), Cell::int(c)]);
        }
        write!(out, "{}", t.render(format))?;
        return Ok(());
    }
    let rf = exact(&ts, &a.exact_opts)?;
    match format {
        Format::Json => {
            let mut v = coefficients_json(&rf);
            v["k"] = a.lang.k.into();
            v["alphabet"] = a.lang.alphabet.into();
            v["p"] = a.p.into();
            write!(out, "{}", json_text(&v))?;
        }
        Format::Table => writeln!(out, "{rf}")?,
        Format::Csv if a.pretty => writeln!(out, "{rf}")?,
        Format::Csv => writeln!(out, "{}", rf.to_coefficient_string())?,
    }
    Ok(())
}

fn hp(a: HpArgs, out: &mut dyn Write) -> Outcome {
    a.run.install_pool();
    let alphabet = Alphabet::new(a.lang.alphabet)?;
    let periods: Vec<usize> = match a.p {
        Some(p) => vec![p],
        None => (0..=a.p_max).collect(),
    };
    let header: &[&'static str] = if a.degrees {
        &["p", "states", "h", "d_num", "d_den", "h_pole"]
    } else {
        &["p", "states", "h"]
    };
    let mut t = Table::new(header);
    for p in periods {
        let ts = TransferSystem::build(a.lang.k, p, alphabet)?;
        let g = dominant_growth(&ts, a.tol)?;
        let mut row = vec![Cell::int(p), Cell::int(ts.state_count()), Cell::Real(g.h)];
        if a.degrees {
            if p <= EXACT_DEFAULT_MAX_P {
                let rf = exact(
                    &ts,
                    &Exact {
                        degree_bound: None,
                        force: false,
                    },
                )?;
                let (dn, dd) = rf.degrees();
                let pole = dominant_pole(&rf)?;
                row.extend([Cell::int(dn), Cell::int(dd), Cell::Real(pole.h)]);
            } else {
                row.extend([Cell::Empty, Cell::Empty, Cell::Empty]);
            }
        }
        t.push(row);
    }
    write!(out, "{}", t.render(a.run.format_or(Format::Csv)))?;
    Ok(())
}

fn poles(a: PolesArgs, out: &mut dyn Write) -> Outcome {
    a.run.install_pool();
    let ts = TransferSystem::build(a.lang.k, a.p, Alphabet::new(a.lang.alphabet)?)?;
    let rf = exact(&ts, &a.exact_opts)?;
    let set = all_poles(&rf, a.tol)?;
    match a.run.format_or(Format::Csv) {
        Format::Csv => write!(out, "{}", set.to_csv())?,
        Format::Table => {
            let mut t = Table::new(&["re", "im", "multiplicity"]);
            for (z, m) in &set.roots {
                t.push(vec![Cell::Real(z.re), Cell::Real(z.im), Cell::int(m)]);
            }
            write!(out, "{}", t.aligned())?;
        }
        Format::Json => {
            let roots: Vec<Value> = set
                .roots
                .iter()
                .map(|(z, m)| json!({"re": real_json(z.re), "im": real_json(z.im), "multiplicity": m}))
                .collect();
            let dominant = dominant_pole(&rf).ok();
            let v = json!({
                "k": a.lang.k,
                "alphabet": a.lang.alphabet,
                "p": a.p,
                "roots": roots,
                "residual_tolerance": set.residual_tolerance,
                "x_c": dominant.map(|d| real_json(d.x_c)),
                "h": dominant.map(|d| real_json(d.h)),
            });
            write!(out, "{}", json_text(&v))?;
        }
    }
    Ok(())
}

fn method_label(m: VerificationMethod) -> String {
    match m {
        VerificationMethod::SquarefreeUniform => "squarefree-uniform".into(),
        VerificationMethod::SquarefreeTernary => "squarefree-ternary".into(),
        VerificationMethod::Tmin => "tmin".into(),
        VerificationMethod::TestSet => "test-set".into(),
        VerificationMethod::LengthBound { max_len } => format!("length-bound-{max_len}"),
        VerificationMethod::BeanSufficient => "bean-sufficient".into(),
    }
}

fn verify(a: VerifyArgs, out: &mut dyn Write) -> Outcome {
    a.run.install_pool();
    let (m, file_k) = load_morphism(&a.morphism)?;
    let k = a.k.or(file_k).unwrap_or(3);
    let v = verify_powerfree(&m, k)?;
    let method = method_label(v.method());
    let (verdict, witness, image) = match &v {
        Verification::Verified(_) => ("verified", None, None),
        Verification::Refuted { witness, image, .. } => ("refuted", Some(witness), Some(image)),
    };
    let word = |w: Option<&Word>| w.map_or(Cell::Empty, |w| Cell::text(w.to_string()));
    let mut t = Table::new(&["verdict", "k", "method", "witness", "image"]);
    t.push(vec![
        Cell::text(verdict),
        Cell::int(k),
        Cell::text(method),
        word(witness),
        word(image),
    ]);
    match a.run.format_or(Format::Csv) {
        Format::Json => {
            let row = t.json_value()[0].clone();
            write!(out, "{}", json_text(&row))?;
        }
        f => write!(out, "{}", t.render(f))?,
    }
    Ok(())
}

fn set_text(set: &[Word]) -> String {
    set.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn search(a: SearchArgs, out: &mut dyn Write) -> Outcome {
    a.run.install_pool();
    let target = Alphabet::new(a.target)?;
    let options = SearchOptions {
        limit: a.limit,
        max_candidates: a.max_candidates,
    };
    let run = if a.bean {
        search_bean_generating_sets
    } else {
        search_uniform_generating_sets
    };
    let result = run(a.k, a.source, target, a.length, options)?;
    match a.run.format_or(Format::Json) {
        Format::Json => writeln!(out, "{}", result.to_json())?,
        f => {
            let mut t = Table::new(&["set", "orbit"]);
            for set in &result.sets {
                let orbit = result
                    .orbits
                    .iter()
                    .position(|o| o.members.iter().any(|m| m == set))
                    .map_or(Cell::Empty, Cell::int);
                t.push(vec![Cell::text(set_text(set)), orbit]);
            }
            write!(out, "{}", t.render(f))?;
        }
    }
    Ok(())
}

/// Writes every word of the walk on its own line.
struct Lister<'a> {
    out: &'a mut dyn Write,
    digits: bool,
    error: Option<std::io::Error>,
}

impl Visitor for Lister<'_> {
    fn enter(&mut self, _: u8) {}
    fn leave(&mut self) {}
    fn emit(&mut self, word: &[u8]) -> ControlFlow<()> {
        let r = if self.digits {
            let mut line: Vec<u8> = word.iter().map(|&a| b'0' + a).collect();
            line.push(b'\n');
            self.out.write_all(&line)
        } else {
            writeln!(self.out, "{}", Word::from(word))
        };
        match r {
            Ok(()) => ControlFlow::Continue(()),
            Err(e) => {
                self.error = Some(e);
                ControlFlow::Break(())
            }
        }
    }
}

fn testset(a: TestsetArgs, out: &mut dyn Write) -> Outcome {
    a.run.install_pool();
    let alphabet = Alphabet::new(a.lang.alphabet)?;
    let set = RwTestSet::new(a.lang.k, alphabet)?;
    if a.list {
        let mut lister = Lister {
            out,
            digits: alphabet.size() <= 10,
            error: None,
        };
        let _ = set.walk(&mut lister);
        return match lister.error {
            Some(e) => Err(e.into()),
            None => Ok(()),
        };
    }
    let summary = set.summary();
    match a.run.format_or(Format::Csv) {
        Format::Json => {
            let v = serde_json::to_value(&summary).expect("serializable");
            write!(out, "{}", json_text(&v))?;
        }
        f => {
            let mut t = Table::new(&["length", "count"]);
            for &(len, c) in &summary.by_length {
                t.push(vec![Cell::int(len), Cell::int(c)]);
            }
            write!(out, "{}", t.render(f))?;
        }
    }
    Ok(())
}

impl LanguageName {
    fn parts(self) -> (&'static str, FreenessSpec, Alphabet) {
        match self {
            LanguageName::BinaryCubefree => {
                ("binary-cubefree", FreenessSpec::CUBEFREE, Alphabet::BINARY)
            }
            LanguageName::TernarySquarefree => (
                "ternary-squarefree",
                FreenessSpec::SQUAREFREE,
                Alphabet::TERNARY,
            ),
        }
    }
}

fn provenance_label(p: &Provenance) -> String {
    match p {
        Provenance::Count { n, .. } => format!("count n={n}"),
        Provenance::Morphism { k, r, length, .. } => format!("morphism k={k} r={r} l={length}"),
        Provenance::Brinkhuis { r, length } => format!("brinkhuis r={r} l={length}"),
        Provenance::Reference { key, .. } => key.clone(),
    }
}

fn bounds(a: BoundsArgs, out: &mut dyn Write) -> Outcome {
    a.run.install_pool();
    let (name, spec, alphabet) = a.language.parts();
    let config = a.run.config();
    let nothing_asked = a.count_n.is_empty() && a.morphism.is_none() && a.brinkhuis.is_empty();
    let mut list: Vec<EntropyBound> = Vec::new();
    if a.reference || nothing_asked {
        list.extend(
            reference_constants()
                .for_language(name)
                .filter_map(|c| c.entropy_bound()),
        );
    }
    for &n in &a.count_n {
        let (c, source) = count_at(spec, alphabet, n, &config, a.fixture.as_deref())?;
        let b = entropy_upper_from_count(n, &c)?;
        list.push(if source == Source::Fixture {
            b.with_note("count from fixture")
        } else {
            b
        });
    }
    if let Some(path) = &a.morphism {
        let (m, _) = load_morphism(path)?;
        let r = a.r.expect("required by clap");
        match verify_powerfree(&m, spec.k())? {
            Verification::Verified(receipt) => list.push(lower_bound_from_morphism(&receipt, r)?),
            Verification::Refuted { witness, image, .. } => {
                return Err(Failure::Domain(format!(
                    "morphism is not {spec}: {witness} maps to {image}"
                )))
            }
        }
    }
    for &(r, l) in &a.brinkhuis {
        list.push(brinkhuis_bound(r, l)?);
    }
    match a.run.format_or(Format::Json) {
        Format::Json => {
            let v = Value::Array(list.iter().map(EntropyBound::to_json).collect());
            write!(out, "{}", json_text(&v))?;
        }
        f => {
            let mut t = Table::new(&["kind", "value", "provenance", "citation"]);
            for b in &list {
                let kind = serde_json::to_value(b.kind).expect("serializable");
                t.push(vec![
                    Cell::text(kind.as_str().unwrap_or_default()),
                    Cell::Real(b.value),
                    Cell::text(provenance_label(&b.provenance)),
                    b.citation().map_or(Cell::Empty, Cell::text),
                ]);
            }
            write!(out, "{}", t.render(f))?;
        }
    }
    Ok(())
}

fn freq(a: FreqArgs, out: &mut dyn Write) -> Outcome {
    a.run.install_pool();
    let format = a.run.format;
    let mut json_out = serde_json::Map::new();
    if let Some(path) = &a.morphism {
        let (m, _) = load_morphism(path)?;
        let f = m.pf_frequencies()?;
        match format {
            None | Some(Format::Table) => {
                let parts: Vec<String> = f
                    .iter()
                    .enumerate()
                    .map(|(i, x)| format!("{i}:{x}"))
                    .collect();
                writeln!(out, "{}", parts.join(" "))?;
            }
            Some(Format::Csv) => {
                let mut t = Table::new(&["letter", "frequency"]);
                for (i, x) in f.iter().enumerate() {
                    t.push(vec![Cell::int(i), Cell::text(x.to_string())]);
                }
                write!(out, "{}", t.csv())?;
            }
            Some(Format::Json) => {
                let v: serde_json::Map<String, Value> = f
                    .iter()
                    .enumerate()
                    .map(|(i, x)| (i.to_string(), x.to_string().into()))
                    .collect();
                json_out.insert("frequencies".into(), Value::Object(v));
            }
        }
    }
    if let Some(n) = a.n {
        let spec = spec(a.lang.k, None)?;
        let alphabet = Alphabet::new(a.lang.alphabet)?;
        let (lo, hi) = letter_count_range(spec, alphabet, n, a.letter, &a.run.config())?;
        let ratio = |c: usize| num_rational::BigRational::new(c.into(), n.into()).to_string();
        let mut t = Table::new(&["n", "letter", "min", "max", "lower", "upper"]);
        t.push(vec![
            Cell::int(n),
            Cell::int(a.letter),
            Cell::int(lo),
            Cell::int(hi),
            Cell::text(ratio(lo)),
            Cell::text(ratio(hi)),
        ]);
        match format {
            Some(Format::Json) => {
                json_out.insert("range".into(), t.json_value()[0].clone());
            }
            Some(Format::Csv) => write!(out, "{}", t.csv())?,
            None | Some(Format::Table) => write!(out, "{}", t.aligned())?,
        }
    }
    if format == Some(Format::Json) {
        write!(out, "{}", json_text(&Value::Object(json_out)))?;
    }
    Ok(())
}

fn parse_sets(s: &str) -> Result<Vec<Vec<Word>>, Failure> {
    s.split(';')
        .map(|set| {
            set.split(',')
                .map(|w| Word::parse(w.trim()).map_err(Failure::from))
                .collect()
        })
        .collect()
}

fn brinkhuis(a: BrinkhuisArgs, out: &mut dyn Write) -> Outcome {
    a.run.install_pool();
    let alphabet = Alphabet::new(a.alphabet)?;
    let candidate = match (&a.sets, &a.morphism) {
        (Some(sets), _) => BrinkhuisCandidate::new(alphabet, parse_sets(sets)?)?,
        (None, Some(path)) => {
            let (m, _) = load_morphism(path)?;
            BrinkhuisCandidate::from_images(alphabet, m.images(), a.r.expect("required by clap"))?
        }
        (None, None) => return Err(Failure::Usage("give --sets or --morphism".into())),
    };
    let spec = spec(a.k, None)?;
    let verdict = verify_brinkhuis(&candidate, spec, a.max_len)?;
    let bound = match verdict {
        BrinkhuisVerdict::VerifiedUpTo { .. } => {
            Some(brinkhuis_bound(candidate.r(), candidate.length())?)
        }
        BrinkhuisVerdict::Refuted { .. } => None,
    };
    match a.run.format_or(Format::Json) {
        Format::Json => {
            let v = json!({
                "r": candidate.r(),
                "length": candidate.length(),
                "result": verdict,
                "bound": bound.as_ref().map(EntropyBound::to_json),
            });
            write!(out, "{}", json_text(&v))?;
        }
        f => {
            let mut t = Table::new(&[
                "verdict", "r", "length", "max_len", "bound", "word", "image",
            ]);
            let (name, word, image) = match &verdict {
                BrinkhuisVerdict::VerifiedUpTo { .. } => ("verified", Cell::Empty, Cell::Empty),
                BrinkhuisVerdict::Refuted { word, image, .. } => (
                    "refuted",
                    Cell::text(word.to_string()),
                    Cell::text(image.to_string()),
                ),
            };
            t.push(vec![
                Cell::text(name),
                Cell::int(candidate.r()),
                Cell::int(candidate.length()),
                Cell::int(a.max_len),
                bound.map_or(Cell::Empty, |b| Cell::Real(b.value)),
                word,
                image,
            ]);
            write!(out, "{}", t.render(f))?;
        }
    }
    Ok(())
}
