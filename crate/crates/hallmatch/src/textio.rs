//! The instance file format and report rendering.
//!
//! Instances are plain text, one directive per line, `#` starts a comment:
//!
//! ```text
//! version 1
//! universe [0, 4)
//! set A [0, 2)
//! set B [1, 3) [7/2, 4)
//! demands 3/2 3/2
//! ```
//!
//! All numbers are rational strings (`p/q` or `p`), never decimals, and all
//! intervals are half-open `[lo, hi)`. Sets are normalized on load, so a
//! parse → print → parse round trip is byte-stable. Discrete instances use
//! `ground` / `dset` / `ddemands` directives in the same shape.

use std::fmt::Write as _;

use num_traits::Signed;

use crate::allocate::Allocation;
use crate::atoms::SubsetMask;
use crate::discrete::{DiscreteInstance, DiscreteSolution, ScaledSolution};
use crate::emulate::{
    stage_feasibility, stage_gap_bound, xi_threshold, LimitReport, RefinementRun, XiStage,
};
use crate::error::{Error, Result};
use crate::instance::{Certificate, Instance, Violation};
use crate::interval::{IntervalSet, MeasureSpace};
use crate::oracle::ValidationReport;
use crate::rational::{parse_rational, Rational};

/// A parsed instance together with its set names (the file's identifiers;
/// the solver core itself only deals in indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub names: Vec<String>,
    pub instance: Instance,
}

impl InstanceFile {
    /// Wraps an instance with generated names `A1..An`.
    pub fn with_default_names(instance: Instance) -> Self {
        let names = (1..=instance.n()).map(|k| format!("A{k}")).collect();
        InstanceFile { names, instance }
    }

    pub fn name(&self, k: usize) -> &str {
        &self.names[k]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_rat(text: &str, line: usize) -> Result<Rational> {
    parse_rational(text).map_err(|msg| err(line, msg))
}

/// Parses a whitespace-separated run of `[lo, hi)` intervals.
fn parse_intervals(text: &str, line: usize) -> Result<Vec<(Rational, Rational)>> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        if !rest.starts_with('[') {
            return Err(err(line, format!("expected '[' before {rest:?}")));
        }
        let close = rest
            .find(')')
            .ok_or_else(|| err(line, "unterminated interval, missing ')'"))?;
        let inner = &rest[1..close];
        let (lo_text, hi_text) = inner
            .split_once(',')
            .ok_or_else(|| err(line, format!("interval {inner:?} needs 'lo, hi'")))?;
        let lo = parse_rat(lo_text, line)?;
        let hi = parse_rat(hi_text, line)?;
        if lo >= hi {
            return Err(err(line, format!("empty interval [{lo}, {hi})")));
        }
        out.push((lo, hi));
        rest = rest[close + 1..].trim_start();
    }
    Ok(out)
}

fn write_intervals(out: &mut String, set: &IntervalSet) {
    for part in set.parts() {
        let _ = write!(out, " [{}, {})", part.lo(), part.hi());
    }
}

pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    let mut saw_version = false;
    let mut universe: Option<(usize, IntervalSet)> = None;
    let mut sets: Vec<(usize, String, IntervalSet)> = Vec::new();
    let mut demands: Option<(usize, Vec<Rational>)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (directive, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        if !saw_version {
            if directive != "version" {
                return Err(err(line_no, "file must start with 'version 1'"));
            }
            if rest.trim() != "1" {
                return Err(err(line_no, format!("unsupported version {:?}", rest.trim())));
            }
            saw_version = true;
            continue;
        }
        match directive {
            "version" => return Err(err(line_no, "duplicate version directive")),
            "universe" => {
                if universe.is_some() {
                    return Err(err(line_no, "duplicate universe directive"));
                }
                let pairs = parse_intervals(rest, line_no)?;
                if pairs.is_empty() {
                    return Err(err(line_no, "universe needs at least one interval"));
                }
                universe = Some((line_no, IntervalSet::from_pairs(pairs)?));
            }
            "set" => {
                let (name, body) = rest
                    .trim()
                    .split_once(char::is_whitespace)
                    .unwrap_or((rest.trim(), ""));
                if name.is_empty() {
                    return Err(err(line_no, "set directive needs a name"));
                }
                if sets.iter().any(|(_, n, _)| n == name) {
                    return Err(err(line_no, format!("duplicate set name {name:?}")));
                }
                let pairs = parse_intervals(body, line_no)?;
                sets.push((line_no, name.to_string(), IntervalSet::from_pairs(pairs)?));
            }
            "demands" => {
                if demands.is_some() {
                    return Err(err(line_no, "duplicate demands directive"));
                }
                let values = rest
                    .split_whitespace()
                    .map(|tok| parse_rat(tok, line_no))
                    .collect::<Result<Vec<_>>>()?;
                demands = Some((line_no, values));
            }
            other => return Err(err(line_no, format!("unknown directive {other:?}"))),
        }
    }

    if !saw_version {
        return Err(err(0, "empty instance file"));
    }
    let (universe_line, universe) = universe.ok_or_else(|| err(0, "missing universe"))?;
    if !universe.measure().is_positive() {
        return Err(err(universe_line, "universe must have positive measure"));
    }
    if sets.is_empty() {
        return Err(err(0, "instance needs at least one set"));
    }
    let (demand_line, demand_values) = demands.ok_or_else(|| err(0, "missing demands"))?;
    if demand_values.len() != sets.len() {
        return Err(err(
            demand_line,
            format!("{} demands for {} sets", demand_values.len(), sets.len()),
        ));
    }
    for (pos, m) in demand_values.iter().enumerate() {
        if !m.is_positive() {
            return Err(err(
                demand_line,
                format!("demand {} must be positive, got {m}", pos + 1),
            ));
        }
    }
    for (line_no, name, set) in &sets {
        if !set.is_subset_of(&universe) {
            return Err(err(
                *line_no,
                format!("set {name:?} is not contained in the universe"),
            ));
        }
    }

    let names = sets.iter().map(|(_, n, _)| n.clone()).collect();
    let subsets = sets.into_iter().map(|(_, _, s)| s).collect();
    let instance = Instance::new(MeasureSpace::new(universe)?, subsets, demand_values)?;
    Ok(InstanceFile { names, instance })
}

pub fn print_instance(file: &InstanceFile) -> String {
    let mut out = String::from("version 1\n");
    out.push_str("universe");
    write_intervals(&mut out, file.instance.universe());
    out.push('\n');
    for (k, set) in file.instance.subsets().iter().enumerate() {
        let _ = write!(out, "set {}", file.name(k));
        write_intervals(&mut out, set);
        out.push('\n');
    }
    out.push_str("demands");
    for m in file.instance.demands() {
        let _ = write!(out, " {m}");
    }
    out.push('\n');
    out
}

fn mask_names(file: &InstanceFile, mask: SubsetMask) -> String {
    mask.members()
        .map(|i| file.name(i))
        .collect::<Vec<_>>()
        .join(",")
}

fn write_violation(out: &mut String, file: &InstanceFile, v: &Violation) {
    let _ = writeln!(out, "violating {}", v.i_set);
    let _ = writeln!(out, "violating_sets {}", mask_names(file, v.i_set));
    let _ = writeln!(out, "union_measure {}", v.union_measure);
    let _ = writeln!(out, "demand_sum {}", v.demand_sum);
    let _ = writeln!(out, "deficit {}", v.deficit());
}

pub fn print_certificate(file: &InstanceFile, cert: &Certificate) -> String {
    let mut out = String::new();
    match cert {
        Certificate::Feasible => out.push_str("verdict feasible\n"),
        Certificate::Violating(v) => {
            out.push_str("verdict infeasible\n");
            write_violation(&mut out, file, v);
        }
    }
    out
}

pub fn print_allocation_report(file: &InstanceFile, alloc: &Allocation) -> String {
    let mut out = String::from("verdict feasible\n");
    for (k, part) in alloc.parts().iter().enumerate() {
        let _ = write!(out, "B {}", file.name(k));
        write_intervals(&mut out, part);
        out.push('\n');
        let _ = writeln!(out, "measure {} {}", file.name(k), part.measure());
    }
    out
}

/// Reads an allocation back from report text: one `B <name> <intervals>`
/// line per set; other lines are ignored.
pub fn parse_allocation(text: &str, file: &InstanceFile) -> Result<Allocation> {
    let mut parts: Vec<Option<IntervalSet>> = vec![None; file.instance.n()];
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        let Some(rest) = line.strip_prefix("B ") else {
            continue;
        };
        let (name, body) = rest
            .trim()
            .split_once(char::is_whitespace)
            .unwrap_or((rest.trim(), ""));
        let k = file
            .index_of(name)
            .ok_or_else(|| err(line_no, format!("unknown set name {name:?}")))?;
        if parts[k].is_some() {
            return Err(err(line_no, format!("duplicate B line for {name:?}")));
        }
        parts[k] = Some(IntervalSet::from_pairs(parse_intervals(body, line_no)?)?);
    }
    let mut out = Vec::with_capacity(parts.len());
    for (k, part) in parts.into_iter().enumerate() {
        out.push(part.ok_or_else(|| err(0, format!("no B line for set {:?}", file.name(k))))?);
    }
    Ok(Allocation::new(out))
}

pub fn print_validation(report: &ValidationReport) -> String {
    let mut out = String::new();
    if report.pass() {
        out.push_str("validation pass\n");
    } else {
        out.push_str("validation fail\n");
        for f in &report.failures {
            let _ = writeln!(out, "failure {f}");
        }
    }
    out
}

/// Renders one discretization stage: the atom/E/block table, the thinned
/// sets, the deflated demands, and (for solved stages) the chosen regions.
/// For n ≤ 8 the per-mask discretization-loss and stage-feasibility tables
/// are included.
pub fn print_stage_report(file: &InstanceFile, stage: &XiStage) -> String {
    let inst = &file.instance;
    let mut out = String::new();
    let _ = writeln!(out, "xi {}", stage.xi());
    let _ = writeln!(out, "threshold {}", xi_threshold(inst));
    let _ = writeln!(out, "above_threshold {}", stage.exceeds_threshold());
    for (mask, e) in stage.e_table() {
        let _ = writeln!(
            out,
            "atom {} e_measure {} blocks {}",
            mask,
            e.measure(),
            stage.blocks(mask).len()
        );
    }
    for (k, a) in stage.a_xi().iter().enumerate() {
        let _ = writeln!(out, "a_xi {} measure {}", file.name(k), a.measure());
    }
    for (k, d) in stage.demands().iter().enumerate() {
        let _ = writeln!(out, "d {} {}", file.name(k), d);
    }
    if inst.n() <= 8 {
        for mask in SubsetMask::all_nonempty(inst.n()) {
            if let Ok((actual, bound)) = stage_gap_bound(inst, stage, mask) {
                let _ = writeln!(
                    out,
                    "loss {mask} actual {actual} bound {bound} ok {}",
                    actual < bound
                );
            }
            if let Ok((lhs, rhs, strict)) = stage_feasibility(stage, mask) {
                let _ = writeln!(
                    out,
                    "feasibility {mask} lhs {lhs} rhs {rhs} holds {} strict {strict}",
                    lhs >= rhs
                );
            }
        }
    }
    if let Some(solution) = stage.solution() {
        for (k, b) in solution.iter().enumerate() {
            let _ = write!(out, "b {}", file.name(k));
            write_intervals(&mut out, b);
            out.push('\n');
            let _ = writeln!(out, "b_measure {} {}", file.name(k), b.measure());
            let _ = writeln!(
                out,
                "gap {} {}",
                file.name(k),
                &inst.demands()[k] - b.measure()
            );
        }
    }
    out
}

/// Renders a refinement run: one summary line per demand per stage, then the
/// limit comparison.
pub fn print_run_report(file: &InstanceFile, run: &RefinementRun, limit: &LimitReport) -> String {
    let inst = &file.instance;
    let mut out = String::new();
    for (i, stage) in run.stages().iter().enumerate() {
        let _ = writeln!(out, "stage {i} xi {}", stage.xi());
        if let Some(solution) = stage.solution() {
            for (k, b) in solution.iter().enumerate() {
                let measure = b.measure();
                let _ = writeln!(
                    out,
                    "stage {i} b {} measure {} gap {}",
                    file.name(k),
                    measure,
                    &inst.demands()[k] - &measure
                );
            }
        }
    }
    let _ = writeln!(out, "final_xi {}", limit.final_xi);
    let _ = writeln!(out, "gap_bound {}", limit.gap_bound);
    for (k, entry) in limit.per_demand.iter().enumerate() {
        let _ = writeln!(
            out,
            "limit {} measure {} gap {} exact_gap {} subset {} within_bound {}",
            file.name(k),
            entry.emulator_measure,
            entry.emulator_gap,
            entry.exact_gap,
            entry.subset_ok,
            entry.within_bound
        );
    }
    let _ = writeln!(out, "disjoint {}", limit.disjoint);
    out
}

/// A parsed discrete instance with its element and set names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteFile {
    pub names: Vec<String>,
    pub instance: DiscreteInstance,
}

pub fn parse_discrete(text: &str) -> Result<DiscreteFile> {
    let mut saw_version = false;
    let mut ground: Option<(usize, Vec<String>)> = None;
    let mut sets: Vec<(usize, String, Vec<String>)> = Vec::new();
    let mut demands: Option<(usize, Vec<usize>)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (directive, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        if !saw_version {
            if directive != "version" || rest.trim() != "1" {
                return Err(err(line_no, "file must start with 'version 1'"));
            }
            saw_version = true;
            continue;
        }
        match directive {
            "ground" => {
                if ground.is_some() {
                    return Err(err(line_no, "duplicate ground directive"));
                }
                ground = Some((
                    line_no,
                    rest.split_whitespace().map(str::to_string).collect(),
                ));
            }
            "dset" => {
                let (name, body) = rest
                    .trim()
                    .split_once(char::is_whitespace)
                    .unwrap_or((rest.trim(), ""));
                if name.is_empty() {
                    return Err(err(line_no, "dset directive needs a name"));
                }
                if sets.iter().any(|(_, n, _)| n == name) {
                    return Err(err(line_no, format!("duplicate set name {name:?}")));
                }
                sets.push((
                    line_no,
                    name.to_string(),
                    body.split_whitespace().map(str::to_string).collect(),
                ));
            }
            "ddemands" => {
                if demands.is_some() {
                    return Err(err(line_no, "duplicate ddemands directive"));
                }
                let values = rest
                    .split_whitespace()
                    .map(|tok| {
                        tok.parse::<usize>()
                            .map_err(|_| err(line_no, format!("malformed count {tok:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                demands = Some((line_no, values));
            }
            other => return Err(err(line_no, format!("unknown directive {other:?}"))),
        }
    }

    if !saw_version {
        return Err(err(0, "empty instance file"));
    }
    let (_, elements) = ground.ok_or_else(|| err(0, "missing ground"))?;
    let (demand_line, demand_values) = demands.ok_or_else(|| err(0, "missing ddemands"))?;
    if demand_values.len() != sets.len() {
        return Err(err(
            demand_line,
            format!("{} demands for {} sets", demand_values.len(), sets.len()),
        ));
    }
    let index_of = |name: &str, line: usize| -> Result<usize> {
        elements
            .iter()
            .position(|e| e == name)
            .ok_or_else(|| err(line, format!("unknown element {name:?}")))
    };
    let mut subsets = Vec::with_capacity(sets.len());
    let mut names = Vec::with_capacity(sets.len());
    for (line_no, name, members) in sets {
        let mut set = std::collections::BTreeSet::new();
        for m in members {
            set.insert(index_of(&m, line_no)?);
        }
        subsets.push(set);
        names.push(name);
    }
    let instance = DiscreteInstance::new(elements, subsets, demand_values)?;
    Ok(DiscreteFile { names, instance })
}

pub fn print_discrete_solution(
    file: &DiscreteFile,
    solution: &DiscreteSolution,
    scaled: Option<&ScaledSolution>,
) -> String {
    let mut out = String::new();
    match solution {
        DiscreteSolution::Parts(parts) => {
            out.push_str("verdict feasible\n");
            for (k, part) in parts.iter().enumerate() {
                let _ = write!(out, "D {}", file.names[k]);
                for &e in part {
                    let _ = write!(out, " {}", file.instance.ground()[e]);
                }
                out.push('\n');
            }
            if let Some(s) = scaled {
                let _ = writeln!(out, "xi {}", s.xi);
                if let Some(eta) = &s.eta {
                    for (k, value) in eta.iter().enumerate() {
                        let _ = writeln!(out, "eta {} {}", file.names[k], value);
                    }
                }
            }
        }
        DiscreteSolution::Violating(mask) => {
            out.push_str("verdict infeasible\n");
            let _ = writeln!(out, "violating {mask}");
            let names: Vec<&str> = mask.members().map(|i| file.names[i].as_str()).collect();
            let _ = writeln!(out, "violating_sets {}", names.join(","));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, GenMode};
    use crate::rational::{integer, rational};

    const SAMPLE: &str = "\
# two overlapping sets
version 1
universe [0, 4)
set A [0, 2)
set B [1, 3) [7/2, 4)
demands 3/2 3/2
";

    #[test]
    fn parses_sample() {
        let file = parse_instance(SAMPLE).unwrap();
        assert_eq!(file.names, vec!["A", "B"]);
        assert_eq!(file.instance.n(), 2);
        assert_eq!(file.instance.demands()[0], rational(3, 2));
        assert_eq!(file.instance.subsets()[1].parts().len(), 2);
    }

    #[test]
    fn minimal_single_set_file() {
        let text = "version 1\nuniverse [0, 1)\nset A [0, 1)\ndemands 1\n";
        let file = parse_instance(text).unwrap();
        assert_eq!(file.instance.n(), 1);
        assert_eq!(file.instance.demands()[0], integer(1));
    }

    #[test]
    fn demand_parses_exactly() {
        let text = "version 1\nuniverse [0, 1)\nset A [0, 1)\ndemands 3/5\n";
        let file = parse_instance(text).unwrap();
        assert_eq!(file.instance.demands()[0], rational(3, 5));
    }

    #[test]
    fn overlapping_intervals_merge_on_load() {
        let text = "version 1\nuniverse [0, 4)\nset A [0, 2) [1, 3)\ndemands 1\n";
        let file = parse_instance(text).unwrap();
        assert_eq!(file.instance.subsets()[0].parts().len(), 1);
        assert_eq!(file.instance.subsets()[0].measure(), integer(3));
    }

    #[test]
    fn parse_errors_carry_lines() {
        let bad_rational = "version 1\nuniverse [0, 4)\nset A [0, 2)\ndemands 0.5\n";
        match parse_instance(bad_rational) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        let empty_interval = "version 1\nuniverse [0, 4)\nset A [2, 2)\ndemands 1\n";
        match parse_instance(empty_interval) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        let outside = "version 1\nuniverse [0, 4)\nset A [0, 5)\ndemands 1\n";
        match parse_instance(outside) {
            Err(Error::Parse { line, msg }) => {
                assert_eq!(line, 3);
                assert!(msg.contains("universe"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        let nonpositive = "version 1\nuniverse [0, 4)\nset A [0, 2)\ndemands 0\n";
        match parse_instance(nonpositive) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn print_parse_roundtrip_is_stable() {
        for seed in 0..30 {
            let g = generate(seed, 1 + (seed as usize % 4), GenMode::Feasible, 16).unwrap();
            let file = InstanceFile::with_default_names(g.instance.clone());
            let text = print_instance(&file);
            let back = parse_instance(&text).unwrap();
            assert_eq!(back.instance, g.instance, "seed {seed}");
            assert_eq!(print_instance(&back), text, "seed {seed}");
        }
    }

    #[test]
    fn allocation_roundtrip() {
        let file = parse_instance(SAMPLE).unwrap();
        let out = crate::allocate::allocate_exact(&file.instance).unwrap();
        let alloc = out.allocation().unwrap();
        let text = print_allocation_report(&file, alloc);
        let back = parse_allocation(&text, &file).unwrap();
        assert_eq!(&back, alloc);
    }

    #[test]
    fn allocation_requires_all_sets() {
        let file = parse_instance(SAMPLE).unwrap();
        assert!(matches!(
            parse_allocation("B A [0, 3/2)\n", &file),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_allocation("B C [0, 1)\n", &file),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn discrete_file_parses() {
        let text = "version 1\nground a b c\ndset X a b\ndset Y b c\nddemands 1 2\n";
        let file = parse_discrete(text).unwrap();
        assert_eq!(file.instance.n(), 2);
        assert_eq!(file.instance.ground().len(), 3);
        assert_eq!(file.instance.demands(), &[1, 2]);
        let unknown = "version 1\nground a\ndset X b\nddemands 1\n";
        assert!(matches!(parse_discrete(unknown), Err(Error::Parse { .. })));
    }
}
