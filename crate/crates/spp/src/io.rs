//! Instance and matching files.
//!
//! Instances are JSON documents with 1-based indices:
//!
//! ```json
//! {
//!   "L": 2,
//!   "S": 3,
//!   "constraints": [[1, 2]],
//!   "ranking": {"RL": [[1, 2, 3], [2, 1, 3]], "RS": [[1, 2, 1], [2, 1, 2]]}
//! }
//! ```
//!
//! `constraints` lists directed pairs `[from, to]` meaning `to ∈ C_from`
//! (direction is preserved through a round trip even though the predicates
//! only use the undirected closure). Exactly one of `ranking` (`RL` =
//! cell-rank rows, `RS` = channel-rank rows) or `utility` (`U` = utility
//! rows) must be present. Reals are written in scientific notation with 17
//! significant digits, which round-trips every finite `f64` exactly; writing
//! is hand-rolled so output bytes are stable, parsing is serde.
//!
//! Matching files are `{"assignment": [...]}` with 1-based channels (value
//! `S` = virtual).

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Result, SppError};
use crate::graph::ConstraintGraph;
use crate::model::{Instance, Matching, Profile, RankingProfile, UtilityProfile};

/// Renders a real in scientific notation with 17 significant digits — the
/// precision at which decimal → binary64 conversion is exact. All file
/// output funnels floats through here so artifacts are byte-stable.
pub fn format_f64(value: f64) -> String {
    format!("{value:.16e}")
}

fn write_int_matrix(out: &mut String, rows: &[Vec<u32>]) {
    out.push('[');
    for (i, row) in rows.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push('[');
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{v}");
        }
        out.push(']');
    }
    out.push(']');
}

/// Serializes an instance to its canonical JSON string (stable bytes).
pub fn instance_to_json(inst: &Instance) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        "{{\"L\":{},\"S\":{},\"constraints\":[",
        inst.num_cells(),
        inst.num_channels()
    );
    for (i, (from, to)) in inst.constraints().directed_edges().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "[{},{}]", from + 1, to + 1);
    }
    out.push_str("],");
    match inst.profile() {
        Profile::Ranking(p) => {
            out.push_str("\"ranking\":{\"RL\":");
            write_int_matrix(&mut out, p.cell_ranks());
            out.push_str(",\"RS\":");
            write_int_matrix(&mut out, p.channel_ranks());
            out.push('}');
        }
        Profile::Utility(p) => {
            out.push_str("\"utility\":{\"U\":[");
            for (i, row) in p.utilities().iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('[');
                for (j, &u) in row.iter().enumerate() {
                    if j > 0 {
                        out.push(',');
                    }
                    out.push_str(&format_f64(u));
                }
                out.push(']');
            }
            out.push_str("]}");
        }
    }
    out.push('}');
    out
}

/// Writes an instance file (canonical JSON plus a trailing newline).
pub fn save_instance(inst: &Instance, path: &Path) -> Result<()> {
    let mut text = instance_to_json(inst);
    text.push('\n');
    std::fs::write(path, text).map_err(|e| SppError::io(path, e))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    #[serde(rename = "L")]
    num_cells: usize,
    #[serde(rename = "S")]
    num_channels: usize,
    constraints: Vec<[usize; 2]>,
    #[serde(default)]
    ranking: Option<RawRanking>,
    #[serde(default)]
    utility: Option<RawUtility>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRanking {
    #[serde(rename = "RL")]
    cell_ranks: Vec<Vec<u32>>,
    #[serde(rename = "RS")]
    channel_ranks: Vec<Vec<u32>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawUtility {
    #[serde(rename = "U")]
    utilities: Vec<Vec<f64>>,
}

/// Parses an instance from JSON text. `origin` labels error messages (a
/// path or `"<stdin>"`).
pub fn instance_from_json(text: &str, origin: &str) -> Result<Instance> {
    let raw: RawInstance = serde_json::from_str(text).map_err(|e| SppError::Parse {
        path: origin.to_string(),
        detail: e.to_string(),
    })?;
    if raw.num_cells < 1 || raw.num_channels < 2 {
        return Err(SppError::Validation(format!(
            "need L >= 1 and S >= 2, got L={} S={}",
            raw.num_cells, raw.num_channels
        )));
    }
    let mut directed = vec![BTreeSet::new(); raw.num_cells];
    for &[from, to] in &raw.constraints {
        if from == 0 || to == 0 || from > raw.num_cells || to > raw.num_cells {
            return Err(SppError::Validation(format!(
                "constraint [{from},{to}] out of range for L={} (indices are 1-based)",
                raw.num_cells
            )));
        }
        directed[from - 1].insert(to - 1);
    }
    let graph = ConstraintGraph::from_directed_sets(directed)?;
    let profile = match (raw.ranking, raw.utility) {
        (Some(r), None) => Profile::Ranking(RankingProfile::new(r.cell_ranks, r.channel_ranks)?),
        (None, Some(u)) => Profile::Utility(UtilityProfile::new(u.utilities)?),
        (Some(_), Some(_)) => {
            return Err(SppError::Validation(
                "instance must carry exactly one of `ranking` or `utility`, got both".into(),
            ))
        }
        (None, None) => {
            return Err(SppError::Validation(
                "instance must carry exactly one of `ranking` or `utility`, got neither".into(),
            ))
        }
    };
    if profile.num_cells() != raw.num_cells || profile.num_channels() != raw.num_channels {
        return Err(SppError::Validation(format!(
            "profile dimensions {}x{} disagree with L={} S={}",
            profile.num_cells(),
            profile.num_channels(),
            raw.num_cells,
            raw.num_channels
        )));
    }
    Instance::new(graph, profile)
}

/// Reads an instance file.
pub fn load_instance(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path).map_err(|e| SppError::io(path, e))?;
    instance_from_json(&text, &path.display().to_string())
}

/// Serializes a matching (1-based channels; `S` = virtual).
pub fn matching_to_json(matching: &Matching) -> String {
    let mut out = String::from("{\"assignment\":[");
    for (i, &s) in matching.assignment().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{}", s + 1);
    }
    out.push_str("]}");
    out
}

/// Writes a matching file.
pub fn save_matching(matching: &Matching, path: &Path) -> Result<()> {
    let mut text = matching_to_json(matching);
    text.push('\n');
    std::fs::write(path, text).map_err(|e| SppError::io(path, e))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMatching {
    assignment: Vec<usize>,
}

/// Parses a matching against an instance (validates length and range).
pub fn matching_from_json(text: &str, inst: &Instance, origin: &str) -> Result<Matching> {
    let raw: RawMatching = serde_json::from_str(text).map_err(|e| SppError::Parse {
        path: origin.to_string(),
        detail: e.to_string(),
    })?;
    if let Some((cell, &s)) = raw
        .assignment
        .iter()
        .enumerate()
        .find(|(_, &s)| s == 0 || s > inst.num_channels())
    {
        return Err(SppError::Validation(format!(
            "cell {} assigned channel {} outside 1..={} (1-based; {} is the virtual channel)",
            cell + 1,
            s,
            inst.num_channels(),
            inst.num_channels()
        )));
    }
    inst.matching_from_assignment(raw.assignment.iter().map(|&s| s - 1).collect())
}

/// Reads a matching file and validates it against `inst`.
pub fn load_matching(path: &Path, inst: &Instance) -> Result<Matching> {
    let text = std::fs::read_to_string(path).map_err(|e| SppError::io(path, e))?;
    matching_from_json(&text, inst, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    fn ranking_instance() -> Instance {
        Instance::new(
            ConstraintGraph::from_edges(5, &[(0, 2), (1, 4)]).unwrap(),
            Profile::Ranking(gen::counterexample_profile()),
        )
        .unwrap()
    }

    #[test]
    fn float_format_round_trips_exactly() {
        for &v in &[
            1.0,
            0.1,
            std::f64::consts::PI,
            1.0 / 3.0,
            f64::MIN_POSITIVE,
            1.7976931348623157e308,
            4.9e-324,
        ] {
            let s = format_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "text was {s}");
        }
    }

    #[test]
    fn ranking_instance_round_trips() {
        let inst = ranking_instance();
        let text = instance_to_json(&inst);
        let back = instance_from_json(&text, "<test>").unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn utility_instance_round_trips_bit_exactly() {
        let profile = gen::gen_shannon_utilities(5, 4, 3, 10.0).unwrap();
        let inst = Instance::new(ConstraintGraph::complete(4), Profile::Utility(profile)).unwrap();
        let text = instance_to_json(&inst);
        let back = instance_from_json(&text, "<test>").unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn directed_constraints_survive_round_trip() {
        // A one-sided constraint must come back one-sided.
        let graph = ConstraintGraph::from_directed_sets(vec![
            [1].into_iter().collect(),
            BTreeSet::new(),
        ])
        .unwrap();
        let profile = gen::gen_ranking_profile(1, 2, 3).unwrap();
        let inst = Instance::new(graph, Profile::Ranking(profile)).unwrap();
        let back = instance_from_json(&instance_to_json(&inst), "<test>").unwrap();
        assert_eq!(back.constraints().directed_edges(), vec![(0, 1)]);
    }

    #[test]
    fn missing_field_errors_name_the_field() {
        let err = instance_from_json(r#"{"L":1,"S":2}"#, "<test>").unwrap_err();
        assert!(err.to_string().contains("constraints"), "got: {err}");
    }

    #[test]
    fn non_permutation_row_is_rejected() {
        let text = r#"{"L":2,"S":3,"constraints":[],"ranking":{"RL":[[1,1,3],[1,2,3]],"RS":[[1,2,1],[2,1,2]]}}"#;
        let err = instance_from_json(text, "<test>").unwrap_err();
        assert!(err.to_string().contains("permutation"), "got: {err}");
    }

    #[test]
    fn both_profiles_rejected() {
        let text = r#"{"L":1,"S":2,"constraints":[],"ranking":{"RL":[[1,2]],"RS":[[1,1]]},"utility":{"U":[[1.0,0.0]]}}"#;
        assert!(instance_from_json(text, "<test>").is_err());
    }

    #[test]
    fn matching_round_trips() {
        let inst = ranking_instance();
        let m = inst.matching_from_assignment(vec![0, 1, 2, 2, 2]).unwrap();
        let back = matching_from_json(&matching_to_json(&m), &inst, "<test>").unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn matching_validates_length_and_range() {
        let inst = ranking_instance();
        assert!(matching_from_json(r#"{"assignment":[1,2]}"#, &inst, "<t>").is_err());
        assert!(matching_from_json(r#"{"assignment":[1,2,3,4,3]}"#, &inst, "<t>").is_err());
        assert!(matching_from_json(r#"{"assignment":[0,1,1,1,1]}"#, &inst, "<t>").is_err());
    }

    #[test]
    fn files_round_trip_on_disk() {
        let dir = tempfile::tempdir().unwrap();
        let inst = ranking_instance();
        let ipath = dir.path().join("instance.json");
        save_instance(&inst, &ipath).unwrap();
        assert_eq!(load_instance(&ipath).unwrap(), inst);

        let m = inst.matching_from_assignment(vec![2, 0, 1, 2, 2]).unwrap();
        let mpath = dir.path().join("matching.json");
        save_matching(&m, &mpath).unwrap();
        assert_eq!(load_matching(&mpath, &inst).unwrap(), m);
    }
}
