//! File formats: the line-oriented `.pgraph` grammar and the hom-spec
//! mini-language, plus renderers for both (round-trip safe).
//!
//! Graph files:
//! ```text
//! group <cone-spec>
//! vertex <id>
//! path <id> : <src> -> <rng> deg <w1> <w2> ...
//! compose <alpha> <beta> = <gamma>
//! # comments
//! ```
//! Degree words are written in the cone's positive generator names, `e` for
//! the identity. Composition lines are required for every composable pair of
//! non-identity paths; identity compositions are implied.
//!
//! Hom specs:
//! ```text
//! hom NAME : DOMAIN -> CODOMAIN { gen = word ; ... }
//! ```
//! with DOMAIN/CODOMAIN one of `free g1 g2 ...`, `free_abelian k`,
//! `bs12_ct`, `bs12_q`, `product(A,B)`, `freeprod(A,B)`, `wreath(A,B)`;
//! words are whitespace-separated codomain group generators with an optional
//! `^-1` suffix, `e` for the identity.

use crate::cones::{Cone, Element, Family};
use crate::pgraph::{validate_graph, Graph, GraphData};
use crate::reductions::{natural_wreath_hom, Hom};
use crate::{Error, Result};
use std::collections::BTreeMap;

/// Built-in fixture sources, embedded so tests and `demo` need no file I/O.
pub fn builtin_fixture(name: &str) -> &'static str {
    match name {
        "m5" => include_str!("../../../fixtures/m5.pgraph"),
        "square" => include_str!("../../../fixtures/square.pgraph"),
        "fork" => include_str!("../../../fixtures/fork.pgraph"),
        "fpath" => include_str!("../../../fixtures/fpath.pgraph"),
        _ => panic!("unknown fixture {}", name),
    }
}

pub fn fixture_names() -> [&'static str; 4] {
    ["m5", "square", "fork", "fpath"]
}

pub fn builtin_graph(name: &str) -> Graph {
    parse_graph_file(name, builtin_fixture(name)).expect("builtin fixtures validate")
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parse a cone spec such as `freeprod(free_abelian 1, free_abelian 1)`.
pub fn parse_cone_spec(text: &str) -> Result<Cone> {
    let mut tokens = tokenize_spec(text);
    let cone = parse_cone_tokens(&mut tokens)?;
    if !tokens.is_empty() {
        return Err(parse_err(
            0,
            format!("trailing tokens in cone spec: {:?}", tokens),
        ));
    }
    Ok(cone)
}

fn tokenize_spec(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '(' | ')' | ',' => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
                out.push(ch.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn parse_cone_tokens(tokens: &mut Vec<String>) -> Result<Cone> {
    if tokens.is_empty() {
        return Err(parse_err(0, "empty cone spec"));
    }
    let head = tokens.remove(0);
    match head.as_str() {
        "free" => {
            let mut gens = Vec::new();
            while let Some(tok) = tokens.first() {
                if tok == "," || tok == ")" {
                    break;
                }
                gens.push(tokens.remove(0));
            }
            if gens.is_empty() {
                return Err(parse_err(0, "free needs at least one generator"));
            }
            let refs: Vec<&str> = gens.iter().map(|s| s.as_str()).collect();
            let mut cone = Cone::free("", &refs);
            cone.name = cone.spec_string();
            Ok(cone)
        }
        "free_abelian" => {
            if tokens.is_empty() {
                return Err(parse_err(0, "free_abelian needs a rank"));
            }
            let k: usize = tokens
                .remove(0)
                .parse()
                .map_err(|_| parse_err(0, "free_abelian rank must be a number"))?;
            if k == 0 {
                return Err(parse_err(0, "free_abelian rank must be positive"));
            }
            let mut cone = Cone::free_abelian("", k);
            cone.name = cone.spec_string();
            Ok(cone)
        }
        "bs12_ct" => Ok(Cone::bs12_ct()),
        "bs12_q" => Ok(Cone::bs12_q()),
        "product" | "freeprod" | "wreath" => {
            if tokens.first().map(|t| t.as_str()) != Some("(") {
                return Err(parse_err(0, format!("{} needs (A, B)", head)));
            }
            tokens.remove(0);
            let a = parse_cone_tokens(tokens)?;
            if tokens.first().map(|t| t.as_str()) != Some(",") {
                return Err(parse_err(0, format!("{} needs two factors", head)));
            }
            tokens.remove(0);
            let b = parse_cone_tokens(tokens)?;
            if tokens.first().map(|t| t.as_str()) != Some(")") {
                return Err(parse_err(0, format!("unclosed {}", head)));
            }
            tokens.remove(0);
            Ok(match head.as_str() {
                "product" => Cone::product(a, b),
                "freeprod" => Cone::free_product(a, b),
                _ => Cone::wreath(a, b),
            })
        }
        other => Err(parse_err(0, format!("unknown cone family {}", other))),
    }
}

/// Evaluate a degree word over the cone's positive generator names.
fn eval_positive_word(cone: &Cone, tokens: &[&str], line: usize) -> Result<Element> {
    let gens: BTreeMap<String, Element> = cone.p_generators().into_iter().collect();
    let mut out = cone.identity();
    for tok in tokens {
        if *tok == "e" {
            continue;
        }
        let g = gens
            .get(*tok)
            .ok_or_else(|| parse_err(line, format!("unknown generator {}", tok)))?;
        out = cone.mul(&out, g)?;
    }
    Ok(out)
}

/// Evaluate a word over the cone's group generator names, `^-1` allowed.
fn eval_group_word(cone: &Cone, tokens: &[&str], line: usize) -> Result<Element> {
    let gens: BTreeMap<String, Element> = cone.g_generators().into_iter().collect();
    let mut out = cone.identity();
    for tok in tokens {
        if *tok == "e" {
            continue;
        }
        let (name, inv) = match tok.strip_suffix("^-1") {
            Some(base) => (base, true),
            None => (*tok, false),
        };
        let g = gens
            .get(name)
            .ok_or_else(|| parse_err(line, format!("unknown generator {}", name)))?;
        let g = if inv { cone.inv(g)? } else { g.clone() };
        out = cone.mul(&out, &g)?;
    }
    Ok(out)
}

/// Parse and validate a graph file. Unknown directives are rejected;
/// validation failure is an error carrying the first violated law.
pub fn parse_graph_file(name: &str, text: &str) -> Result<Graph> {
    let mut data: Option<GraphData> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let stripped = raw.split('#').next().unwrap_or("").trim();
        if stripped.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = stripped.split_whitespace().collect();
        match tokens[0] {
            "group" => {
                if data.is_some() {
                    return Err(parse_err(line, "duplicate group line"));
                }
                let cone = parse_cone_spec(&stripped["group".len()..]).map_err(|e| match e {
                    Error::Parse { msg, .. } => parse_err(line, msg),
                    other => other,
                })?;
                data = Some(GraphData::new(name, cone));
            }
            "vertex" => {
                let data = data
                    .as_mut()
                    .ok_or_else(|| parse_err(line, "vertex before group"))?;
                if tokens.len() != 2 {
                    return Err(parse_err(line, "vertex takes one id"));
                }
                data.add_vertex(tokens[1])
                    .map_err(|e| parse_err(line, e.to_string()))?;
            }
            "path" => {
                let data = data
                    .as_mut()
                    .ok_or_else(|| parse_err(line, "path before group"))?;
                // path <id> : <src> -> <rng> deg <word...>
                let deg_pos = tokens
                    .iter()
                    .position(|t| *t == "deg")
                    .ok_or_else(|| parse_err(line, "path needs a deg clause"))?;
                if tokens.len() < 7 || tokens[2] != ":" || tokens[4] != "->" || deg_pos != 6 {
                    return Err(parse_err(
                        line,
                        "expected: path <id> : <src> -> <rng> deg <word>",
                    ));
                }
                let degree = eval_positive_word(&data.cone, &tokens[7..], line)?;
                data.add_path(tokens[1], tokens[3], tokens[5], degree)
                    .map_err(|e| parse_err(line, e.to_string()))?;
            }
            "compose" => {
                let data = data
                    .as_mut()
                    .ok_or_else(|| parse_err(line, "compose before group"))?;
                if tokens.len() != 5 || tokens[3] != "=" {
                    return Err(parse_err(line, "expected: compose <a> <b> = <c>"));
                }
                data.add_compose(tokens[1], tokens[2], tokens[4])
                    .map_err(|e| parse_err(line, e.to_string()))?;
            }
            other => {
                return Err(parse_err(line, format!("unknown directive {}", other)));
            }
        }
    }
    let data = data.ok_or_else(|| parse_err(0, "missing group line"))?;
    let (report, graph) = validate_graph(data);
    graph.ok_or_else(|| {
        Error::ValidationFailed(
            report
                .witnesses
                .first()
                .cloned()
                .unwrap_or_else(|| "unknown law".to_string()),
        )
    })
}

/// Render a graph back to the file grammar; `parse_graph_file` of the output
/// reproduces the graph.
pub fn render_graph_file(g: &Graph) -> String {
    let cone = g.cone();
    let pgens = cone.p_generators();
    let mut out = format!("group {}\n", cone.spec_string());
    let data = g.data();
    for p in &data.paths {
        if p.is_vertex {
            out.push_str(&format!("vertex {}\n", p.id));
        }
    }
    for p in &data.paths {
        if !p.is_vertex {
            let word = cone
                .as_positive_word(&p.degree)
                .expect("degrees are positive");
            let word_str = if word.is_empty() {
                "e".to_string()
            } else {
                word.iter()
                    .map(|i| pgens[*i].0.clone())
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            out.push_str(&format!(
                "path {} : {} -> {} deg {}\n",
                p.id,
                g.id(p.source),
                g.id(p.range),
                word_str
            ));
        }
    }
    for (&(a, b), &c) in &data.compose {
        if !g.path(a).is_vertex && !g.path(b).is_vertex {
            out.push_str(&format!("compose {} {} = {}\n", g.id(a), g.id(b), g.id(c)));
        }
    }
    out
}

/// Parse a hom spec. When the hom is the natural free-product-to-wreath map,
/// the wreath decoder is registered automatically.
pub fn parse_hom_spec(text: &str) -> Result<Hom> {
    let cleaned: String = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join(" ");
    let cleaned = cleaned.trim();
    let rest = cleaned
        .strip_prefix("hom ")
        .ok_or_else(|| parse_err(1, "hom spec must start with: hom NAME :"))?;
    let colon = rest
        .find(':')
        .ok_or_else(|| parse_err(1, "missing : after hom name"))?;
    let name = rest[..colon].trim().to_string();
    if name.is_empty() {
        return Err(parse_err(1, "empty hom name"));
    }
    let rest = &rest[colon + 1..];
    let arrow = rest
        .find("->")
        .ok_or_else(|| parse_err(1, "missing -> between domain and codomain"))?;
    let domain = parse_cone_spec(&rest[..arrow])?;
    let rest = &rest[arrow + 2..];
    let brace = rest
        .find('{')
        .ok_or_else(|| parse_err(1, "missing { generator assignments }"))?;
    let codomain = parse_cone_spec(&rest[..brace])?;
    let body = rest[brace + 1..]
        .strip_suffix('}')
        .map(|s| s.to_string())
        .or_else(|| {
            let end = rest.rfind('}')?;
            Some(rest[brace + 1..end].to_string())
        })
        .ok_or_else(|| parse_err(1, "missing closing }"))?;

    let mut assignments: BTreeMap<String, Element> = BTreeMap::new();
    for entry in body.split(';') {
        let entry = entry.trim();
        if entry.is_empty() {
            continue;
        }
        let eq = entry
            .find('=')
            .ok_or_else(|| parse_err(1, format!("missing = in assignment {:?}", entry)))?;
        let gen = entry[..eq].trim().to_string();
        let word: Vec<&str> = entry[eq + 1..].split_whitespace().collect();
        let img = eval_group_word(&codomain, &word, 1)?;
        if assignments.insert(gen.clone(), img).is_some() {
            return Err(parse_err(1, format!("duplicate assignment for {}", gen)));
        }
    }
    let gens = domain.g_generators();
    let mut images = Vec::new();
    for (gname, _) in &gens {
        let img = assignments
            .remove(gname)
            .ok_or_else(|| parse_err(1, format!("missing assignment for generator {}", gname)))?;
        images.push(img);
    }
    if let Some((extra, _)) = assignments.into_iter().next() {
        return Err(parse_err(1, format!("unknown generator {}", extra)));
    }
    let hom = Hom::new(&name, domain.clone(), codomain.clone(), images.clone())?;
    hom.check_order_hom()?;

    // Natural wreath map: same factors, generators to their embedded copies.
    if let (Family::FreeProd(da, db), Family::Wreath(ca, cb)) = (&domain.family, &codomain.family) {
        if da == ca && db == cb {
            let natural = natural_wreath_hom(&name, (**da).clone(), (**db).clone());
            if natural.images() == images.as_slice() {
                return Ok(natural);
            }
        }
    }
    Ok(hom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::{check_reduction, CheckMode};
    use crate::Status;

    #[test]
    fn fixtures_parse_and_roundtrip() {
        for name in fixture_names() {
            let g = builtin_graph(name);
            let rendered = render_graph_file(&g);
            let back = parse_graph_file(name, &rendered).unwrap();
            assert_eq!(back, g, "round-trip failed for {}", name);
        }
    }

    #[test]
    fn m5_fixture_shape() {
        let g = builtin_graph("m5");
        assert_eq!(g.len(), 13);
        assert_eq!(g.vertices().len(), 5);
        assert_eq!(g.cone().spec_string(), "bs12_ct");
    }

    #[test]
    fn unknown_generator_in_degree_is_a_parse_error() {
        let text = "group bs12_ct\nvertex v\npath p : v -> v deg c q\n";
        match parse_graph_file("bad", text) {
            Err(Error::Parse { line, msg }) => {
                assert_eq!(line, 3);
                assert!(msg.contains("unknown generator q"));
            }
            other => panic!("expected parse error, got {:?}", other),
        }
    }

    #[test]
    fn hom_files_parse() {
        let f2bs = parse_hom_spec(include_str!("../../../fixtures/f2_to_bs12.hom")).unwrap();
        assert_eq!(f2bs.name, "f2_to_bs12");
        let r = check_reduction(&f2bs, 4, CheckMode::Strong).unwrap();
        assert_eq!(r.status, Status::Pass);

        let f2z = parse_hom_spec(include_str!("../../../fixtures/f2_to_z.hom")).unwrap();
        let catalog = crate::reductions::catalog_hom("f2_to_z").unwrap();
        assert_eq!(f2z.images(), catalog.images());
    }

    #[test]
    fn natural_wreath_file_registers_decoder() {
        let nw = parse_hom_spec(include_str!("../../../fixtures/natural_wreath_z_z.hom")).unwrap();
        assert!(nw.has_decoder());
        let r = check_reduction(&nw, 4, CheckMode::Strong).unwrap();
        assert_eq!(r.status, Status::Pass);
    }

    #[test]
    fn product_domain_hom_parses_and_is_strong() {
        let hom = parse_hom_spec(
            "hom swap : product(free_abelian 1, free_abelian 1) -> free_abelian 2 \
             { 1:x = x1 ; 2:x = x2 }",
        )
        .unwrap();
        let r = check_reduction(&hom, 3, CheckMode::Strong).unwrap();
        assert_eq!(r.status, Status::Pass);
    }

    #[test]
    fn negative_image_is_not_order_hom() {
        let err = parse_hom_spec("hom bad : free a -> bs12_q { a = c^-1 }");
        assert!(matches!(err, Err(Error::NotOrderHom(_))), "{:?}", err);
    }

    #[test]
    fn cone_spec_roundtrip() {
        for spec in [
            "free a b",
            "free_abelian 1",
            "free_abelian 3",
            "bs12_ct",
            "bs12_q",
            "product(free_abelian 1, bs12_q)",
            "freeprod(free_abelian 2, free a b)",
            "wreath(free_abelian 1, free_abelian 1)",
        ] {
            let cone = parse_cone_spec(spec).unwrap();
            assert_eq!(cone.spec_string(), spec);
        }
        assert!(parse_cone_spec("nonsense 3").is_err());
    }
}
