//! Line-oriented text formats.
//!
//! Everything is plain text so runs diff cleanly: rationals as `p/q` or bare
//! integers, one record per line, `#` comments and blank lines ignored.

use crate::cone::InequalitySystem;
use crate::engine::{FoundRay, Triplet};
use crate::error::{Error, Result};
use crate::linalg::RatVector;
use crate::perm::Permutation;
use crate::poset::Poset;
use crate::rat::{format_rat, parse_rat};
use crate::sets::IndexSet;

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
}

// ---------------------------------------------------------------------------
// Cone files: `dim <n> count <k>`, then one dual per line, `*` marking
// injected redundant members.
// ---------------------------------------------------------------------------

pub fn write_cone_file(sys: &InequalitySystem) -> String {
    let mut out = format!("dim {} count {}\n", sys.dim(), sys.len());
    for i in 0..sys.len() {
        let row: Vec<String> = sys.dual(i).iter().map(format_rat).collect();
        out.push_str(&row.join(" "));
        if sys.is_redundant_member(i) {
            out.push_str(" *");
        }
        out.push('\n');
    }
    out
}

pub struct ConeFile {
    pub dim: usize,
    pub duals: Vec<RatVector>,
    pub redundant: Vec<bool>,
    /// Optional trailing `@tag` labels (inequality files).
    pub tags: Vec<Option<String>>,
}

pub fn parse_cone_file(text: &str) -> Result<ConeFile> {
    let mut lines = content_lines(text);
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty cone file".into()))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 4 || tokens[0] != "dim" || tokens[2] != "count" {
        return Err(Error::Parse(format!("bad cone header {header:?}")));
    }
    let dim: usize = tokens[1]
        .parse()
        .map_err(|_| Error::Parse(format!("bad dim {:?}", tokens[1])))?;
    let count: usize = tokens[3]
        .parse()
        .map_err(|_| Error::Parse(format!("bad count {:?}", tokens[3])))?;
    let mut duals = Vec::with_capacity(count);
    let mut redundant = Vec::with_capacity(count);
    let mut tags = Vec::with_capacity(count);
    for line in lines {
        let mut coords = Vec::with_capacity(dim);
        let mut is_redundant = false;
        let mut tag = None;
        for tok in line.split_whitespace() {
            if tok == "*" {
                is_redundant = true;
            } else if let Some(t) = tok.strip_prefix('@') {
                tag = Some(t.to_string());
            } else {
                coords.push(parse_rat(tok)?);
            }
        }
        if coords.len() != dim {
            return Err(Error::Parse(format!(
                "dual line has {} coordinates, expected {dim}",
                coords.len()
            )));
        }
        duals.push(RatVector::new(coords));
        redundant.push(is_redundant);
        tags.push(tag);
    }
    if duals.len() != count {
        return Err(Error::Parse(format!(
            "cone file has {} duals, header says {count}",
            duals.len()
        )));
    }
    Ok(ConeFile { dim, duals, redundant, tags })
}

// ---------------------------------------------------------------------------
// Poset files: `poset <k>`, then one cover pair `i < j` per line.
// ---------------------------------------------------------------------------

pub fn write_poset_file(poset: &Poset) -> String {
    let mut out = format!("poset {}\n", poset.size());
    for (a, b) in poset.cover_pairs() {
        out.push_str(&format!("{a} < {b}\n"));
    }
    out
}

pub fn parse_poset_file(text: &str) -> Result<Poset> {
    let mut lines = content_lines(text);
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty poset file".into()))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 2 || tokens[0] != "poset" {
        return Err(Error::Parse(format!("bad poset header {header:?}")));
    }
    let size: usize = tokens[1]
        .parse()
        .map_err(|_| Error::Parse(format!("bad poset size {:?}", tokens[1])))?;
    let mut covers = Vec::new();
    for line in lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 3 || tokens[1] != "<" {
            return Err(Error::Parse(format!("bad cover line {line:?}")));
        }
        let a: usize = tokens[0]
            .parse()
            .map_err(|_| Error::Parse(format!("bad index {:?}", tokens[0])))?;
        let b: usize = tokens[2]
            .parse()
            .map_err(|_| Error::Parse(format!("bad index {:?}", tokens[2])))?;
        covers.push((a, b));
    }
    Poset::from_covers(size, &covers)
}

// ---------------------------------------------------------------------------
// Group files: one generator per line in image notation.
// ---------------------------------------------------------------------------

pub fn write_group_file(generators: &[Permutation]) -> String {
    let mut out = String::new();
    for g in generators {
        let images: Vec<String> = g.images().iter().map(|i| i.to_string()).collect();
        out.push_str(&images.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_group_file(text: &str, degree: usize) -> Result<Vec<Permutation>> {
    let mut generators = Vec::new();
    for line in content_lines(text) {
        let images: Vec<u32> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad image {t:?}"))))
            .collect::<Result<_>>()?;
        if images.len() != degree {
            return Err(Error::Parse(format!(
                "generator has degree {}, expected {degree}",
                images.len()
            )));
        }
        generators.push(Permutation::from_images(images)?);
    }
    Ok(generators)
}

// ---------------------------------------------------------------------------
// Excluded-face files: one face per line as space-separated indices.
// ---------------------------------------------------------------------------

pub fn parse_faces_file(text: &str, universe: usize) -> Result<Vec<IndexSet>> {
    let mut faces = Vec::new();
    for line in content_lines(text) {
        let mut face = IndexSet::empty(universe);
        for tok in line.split_whitespace() {
            let i: usize = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad index {tok:?}")))?;
            if i >= universe {
                return Err(Error::Parse(format!("index {i} out of range {universe}")));
            }
            face.insert(i);
        }
        faces.push(face);
    }
    Ok(faces)
}

// ---------------------------------------------------------------------------
// Ray/vector files: one vector per line (generic form, space-separated).
// ---------------------------------------------------------------------------

pub fn write_vector_line(v: &RatVector) -> String {
    let parts: Vec<String> = v.iter().map(format_rat).collect();
    parts.join(" ")
}

pub fn parse_vectors_file(text: &str, dim: usize) -> Result<Vec<RatVector>> {
    let mut out = Vec::new();
    for line in content_lines(text) {
        let coords: Vec<_> = line
            .replace(';', " ")
            .split_whitespace()
            .map(parse_rat)
            .collect::<Result<_>>()?;
        if coords.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: coords.len() });
        }
        out.push(RatVector::new(coords));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Graph files: vertex lines `id [label]`, then edge lines `u v weight`.
// ---------------------------------------------------------------------------

pub fn parse_graph_file(text: &str) -> Result<crate::sac::GraphModel> {
    let mut labels: Vec<Option<u32>> = Vec::new();
    let mut ids: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    for line in content_lines(text) {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.len() {
            1 | 2 => {
                ids.push(tokens[0].to_string());
                let label = match tokens.get(1) {
                    None => None,
                    Some(t) => Some(
                        t.parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad label {t:?}")))?,
                    ),
                };
                labels.push(label);
            }
            3 => {
                let find = |name: &str| -> Result<usize> {
                    ids.iter()
                        .position(|i| i == name)
                        .ok_or_else(|| Error::Parse(format!("unknown vertex {name:?}")))
                };
                let u = find(tokens[0])?;
                let v = find(tokens[1])?;
                let w = parse_rat(tokens[2])?;
                edges.push((u, v, w));
            }
            _ => return Err(Error::Parse(format!("bad graph line {line:?}"))),
        }
    }
    crate::sac::GraphModel::new(labels, edges)
}

pub fn write_graph_file(g: &crate::sac::GraphModel) -> String {
    let mut out = String::new();
    for (i, label) in g.labels().iter().enumerate() {
        match label {
            Some(l) => out.push_str(&format!("{i} {l}\n")),
            None => out.push_str(&format!("{i}\n")),
        }
    }
    for (u, v, w) in g.edges() {
        out.push_str(&format!("{u} {v} {}\n", format_rat(w)));
    }
    out
}

// ---------------------------------------------------------------------------
// Checkpoints: open-triplet queue plus accumulated rays, resumable.
// ---------------------------------------------------------------------------

pub struct Checkpoint {
    pub config_echo: String,
    pub iterations: usize,
    /// (down, excluded) pairs; stabilizers are recomputed on resume.
    pub queue: Vec<(IndexSet, IndexSet)>,
    pub rays: Vec<RatVector>,
}

fn write_indices(s: &IndexSet) -> String {
    s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
}

fn parse_indices(s: &str, universe: usize) -> Result<IndexSet> {
    let mut out = IndexSet::empty(universe);
    for tok in s.split_whitespace() {
        let i: usize = tok
            .parse()
            .map_err(|_| Error::Parse(format!("bad index {tok:?}")))?;
        if i >= universe {
            return Err(Error::Parse(format!("index {i} out of range {universe}")));
        }
        out.insert(i);
    }
    Ok(out)
}

pub fn write_checkpoint(
    config_echo: &str,
    iterations: usize,
    queue: &[Triplet],
    rays: &[FoundRay],
) -> String {
    let mut out = String::new();
    out.push_str("checkpoint v1\n");
    out.push_str(&format!("config {config_echo}\n"));
    out.push_str(&format!("iterations {iterations}\n"));
    for t in queue {
        out.push_str(&format!(
            "triplet {} | {}\n",
            write_indices(&t.down),
            write_indices(&t.excluded)
        ));
    }
    for r in rays {
        out.push_str(&format!("ray {}\n", write_vector_line(r.ray.generator())));
    }
    out
}

pub fn parse_checkpoint(text: &str, universe: usize, dim: usize) -> Result<Checkpoint> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some("checkpoint v1") => {}
        other => return Err(Error::Parse(format!("bad checkpoint header {other:?}"))),
    }
    let mut config_echo = String::new();
    let mut iterations = 0;
    let mut queue = Vec::new();
    let mut rays = Vec::new();
    for line in lines {
        if let Some(rest) = line.strip_prefix("config ") {
            config_echo = rest.to_string();
        } else if let Some(rest) = line.strip_prefix("iterations ") {
            iterations = rest
                .parse()
                .map_err(|_| Error::Parse(format!("bad iteration count {rest:?}")))?;
        } else if let Some(rest) = line.strip_prefix("triplet ") {
            let (d, u) = rest
                .split_once('|')
                .ok_or_else(|| Error::Parse(format!("bad triplet line {line:?}")))?;
            queue.push((parse_indices(d, universe)?, parse_indices(u, universe)?));
        } else if let Some(rest) = line.strip_prefix("ray ") {
            let coords: Vec<_> = rest.split_whitespace().map(parse_rat).collect::<Result<_>>()?;
            if coords.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: coords.len() });
            }
            rays.push(RatVector::new(coords));
        } else {
            return Err(Error::Parse(format!("bad checkpoint line {line:?}")));
        }
    }
    Ok(Checkpoint { config_echo, iterations, queue, rays })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cone_file_round_trip() {
        let sys = InequalitySystem::new(
            2,
            vec![RatVector::from_ints(&[1, 0]), RatVector::from_ints(&[-1, 2])],
            Some(vec![false, true]),
        );
        // (-1,2),(1,0) is pointed and full-dimensional
        let sys = sys.unwrap();
        let text = write_cone_file(&sys);
        let parsed = parse_cone_file(&text).unwrap();
        assert_eq!(parsed.dim, 2);
        assert_eq!(parsed.duals, sys.duals());
        assert_eq!(parsed.redundant, vec![false, true]);
        assert!(parse_cone_file("dim 2 count 1\n1\n").is_err());
        assert!(parse_cone_file("").is_err());
    }

    #[test]
    fn poset_file_round_trip() {
        let p = Poset::from_covers(4, &[(0, 2), (1, 2), (2, 3)]).unwrap();
        let text = write_poset_file(&p);
        let q = parse_poset_file(&text).unwrap();
        assert_eq!(q.cover_pairs(), p.cover_pairs());
    }

    #[test]
    fn group_and_faces_files() {
        let gens = vec![Permutation::transposition(3, 0, 2)];
        let text = write_group_file(&gens);
        let parsed = parse_group_file(&text, 3).unwrap();
        assert_eq!(parsed, gens);
        assert!(parse_group_file("0 1\n", 3).is_err());

        let faces = parse_faces_file("0 2\n1\n", 4).unwrap();
        assert_eq!(faces.len(), 2);
        assert_eq!(faces[0].to_vec(), vec![0, 2]);
        assert!(parse_faces_file("9\n", 4).is_err());
    }

    #[test]
    fn vectors_and_comments() {
        let text = "# rays\n1 2/3 -1\n\n0 0 1 # apex-ish\n";
        let vs = parse_vectors_file(text, 3).unwrap();
        assert_eq!(vs.len(), 2);
        assert_eq!(write_vector_line(&vs[0]), "1 2/3 -1");
    }

    #[test]
    fn graph_file_round_trip() {
        let text = "0\n1 0\n2 1\n3 2\n0 1 1\n0 2 1\n0 3 3/2\n";
        let g = parse_graph_file(text).unwrap();
        assert_eq!(g.n_vertices(), 4);
        assert_eq!(g.edges().len(), 3);
        let again = parse_graph_file(&write_graph_file(&g)).unwrap();
        assert_eq!(again.labels(), g.labels());
    }
}
