//! Parsers for the small command-line spec languages: group specs, source
//! presentations, and homomorphism descriptions.

use orbicount::groups::{group_from_generators, FiniteGroup, Permutation, WreathCodec};
use orbicount::presentations::{
    from_json, parse_presentation, presentation_catalog, Family, Presentation, PresentationJson,
};
use orbicount::Error;
use serde::Deserialize;
use std::path::Path;

/// Group specs: `trivial`, `Zn:k`, `Sn:k`, shorthands like `Z4` / `S3`, or a
/// path to a JSON file `{"degree": n, "generators": [[...], ...]}`.
pub fn parse_group(spec: &str) -> Result<FiniteGroup, Error> {
    if spec == "trivial" {
        return Ok(FiniteGroup::trivial());
    }
    if let Some(k) = spec.strip_prefix("Zn:").and_then(|s| s.parse::<usize>().ok()) {
        return Ok(FiniteGroup::cyclic(k));
    }
    if let Some(k) = spec.strip_prefix("Sn:").and_then(|s| s.parse::<usize>().ok()) {
        return Ok(FiniteGroup::symmetric(k));
    }
    if let Some(k) = spec.strip_prefix('Z').and_then(|s| s.parse::<usize>().ok()) {
        return Ok(FiniteGroup::cyclic(k));
    }
    if let Some(k) = spec.strip_prefix('S').and_then(|s| s.parse::<usize>().ok()) {
        return Ok(FiniteGroup::symmetric(k));
    }
    if Path::new(spec).exists() {
        #[derive(Deserialize)]
        struct GeneratorsJson {
            degree: usize,
            generators: Vec<Vec<usize>>,
        }
        let text = std::fs::read_to_string(spec)?;
        let parsed: GeneratorsJson = serde_json::from_str(&text)?;
        let gens: Vec<Permutation> = parsed
            .generators
            .iter()
            .map(|g| {
                Permutation::new(g.clone())
                    .ok_or_else(|| Error::invalid("generator is not a permutation"))
            })
            .collect::<Result<_, _>>()?;
        return group_from_generators(parsed.degree, &gens, 20_000);
    }
    Err(Error::invalid(format!(
        "unknown group spec `{spec}` (use trivial, Zn:k, Sn:k, Z4, S3, or a JSON file)"
    )))
}

/// Gamma specs for `verify`: `family:size`, e.g. `surface:2`.
pub fn parse_gamma(spec: &str) -> Result<Presentation, Error> {
    let (family, size) = spec
        .split_once(':')
        .ok_or_else(|| Error::invalid(format!("gamma spec `{spec}` is not family:size")))?;
    let family = Family::from_name(family)
        .ok_or_else(|| Error::invalid(format!("unknown family `{family}`")))?;
    let size: usize = size
        .parse()
        .map_err(|_| Error::invalid(format!("bad size in gamma spec `{spec}`")))?;
    presentation_catalog(family, size)
}

/// Source presentation from the census/homcount/bundles flags.
pub fn parse_presentation_args(
    family: Option<&str>,
    size: Option<usize>,
    inline: Option<&str>,
    file: Option<&Path>,
) -> Result<Presentation, Error> {
    match (family, inline, file) {
        (Some(f), None, None) => {
            let family = Family::from_name(f)
                .ok_or_else(|| Error::invalid(format!("unknown family `{f}`")))?;
            presentation_catalog(family, size.ok_or_else(|| Error::invalid("--family needs --size"))?)
        }
        (None, Some(text), None) => parse_presentation(text),
        (None, None, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            let trimmed = text.trim_start();
            if trimmed.starts_with('{') {
                let json: PresentationJson = serde_json::from_str(&text)?;
                from_json(&json)
            } else {
                parse_presentation(&text)
            }
        }
        _ => Err(Error::invalid(
            "pass exactly one of --family/--size, --presentation, or --file",
        )),
    }
}

/// Theta spec: `{"images": [{"f": [...], "sigma": [...]}, ...]}`, one entry
/// per generator.
pub fn parse_theta(codec: &WreathCodec, text: &str) -> Result<Vec<usize>, Error> {
    #[derive(Deserialize)]
    struct ThetaJson {
        images: Vec<WreathElementJson>,
    }
    #[derive(Deserialize)]
    struct WreathElementJson {
        f: Vec<usize>,
        sigma: Vec<usize>,
    }
    let parsed: ThetaJson = serde_json::from_str(text)?;
    parsed
        .images
        .iter()
        .map(|w| {
            if w.f.len() != codec.degree() || w.f.iter().any(|&x| x >= codec.base().order()) {
                return Err(Error::invalid("f entry out of range"));
            }
            let sigma = Permutation::new(w.sigma.clone())
                .filter(|s| s.degree() == codec.degree())
                .ok_or_else(|| Error::invalid("sigma is not a permutation of the degree"))?;
            Ok(codec.encode(&w.f, &sigma))
        })
        .collect()
}
