//! The twelve acceptance criteria. Each prints one PASS/FAIL line; the test
//! fails if any criterion does.

use semicoarse::corpus::{corpus_run, parse_fixture, Check, DEFAULT_BOUND};
use semicoarse::homotopy::{is_path, object_equal, Verdict};
use semicoarse::label::Label;
use semicoarse::pi1::pi1_classes;
use semicoarse::random::{law_sample, random_crossing_map, random_homotopy, rng};
use semicoarse::space::{graphs, FiniteSpace};
use semicoarse::splitting::{disconnected_iff_empty_intersection, well_split, well_split_half_lines, which_side_check, Cover, LineRegion};
use semicoarse::strings::{pi1_embedding, string_equiv, Step, StringOfMaps};
use semicoarse::vankampen::{factorize, fixtures, relation_preservation_test, Side};
use semicoarse::zmap::PointMove;
use semicoarse::{Error, Scale, Space, Tail, ZMap};
use rand::Rng;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

const BOUND: usize = 64;
const LAW_STRINGS: usize = 200;
const LAW_SEED: u64 = 2024;
const HOMOTOPY_SAMPLES: usize = 100;
const CROSSING_SAMPLES: usize = 50;
const HALF_LINE_K: i64 = 100;

const LIMIT_FIXTURE: Duration = Duration::from_secs(1);
const LIMIT_EXHAUSTIVE: Duration = Duration::from_secs(5 * 60);
const LIMIT_SWEEP: Duration = Duration::from_secs(10 * 60);
const LIMIT_LAWS: Duration = Duration::from_secs(10 * 60);
const LIMIT_VK: Duration = Duration::from_secs(10 * 60);

type Outcome = std::result::Result<String, String>;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn within(t: Instant, limit: Duration) -> Outcome {
    let e = t.elapsed();
    if e <= limit {
        Ok(format!("{:.2}s", e.as_secs_f64()))
    } else {
        Err(format!("took {:.2}s, limit {:.0}s", e.as_secs_f64(), limit.as_secs_f64()))
    }
}

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn graph_from_mask(n: usize, mask: u32) -> FiniteSpace {
    let mut edges = Vec::new();
    let mut bit = 0;
    for a in 0..n {
        for b in a + 1..n {
            if mask >> bit & 1 == 1 {
                edges.push((a, b));
            }
            bit += 1;
        }
    }
    FiniteSpace::from_edges(n, &edges)
}

fn c1_well_splitting() -> Outcome {
    let mut times = Vec::new();

    let t = Instant::now();
    let six = fixtures::six_vertex();
    let r = well_split(&six, &fixtures::six_vertex_cover(&six));
    ensure(r.verdict, "six-vertex cover is not well-split")?;
    times.push(within(t, LIMIT_FIXTURE)?);

    let t = Instant::now();
    let (five, cover) = fixtures::five_vertex();
    let r = well_split(&five, &cover);
    ensure(!r.verdict, "five-vertex cover reported well-split")?;
    let name = |v: usize| five.label(v).to_string();
    let (a, b) = (five.vertex(&Label::Name("a".into())).unwrap(), five.vertex(&Label::Name("b".into())).unwrap());
    let hit = r.failures.iter().find(|f| f.condition == 2 && [f.triple.0, f.triple.1, f.triple.2].contains(&a) && [f.triple.0, f.triple.1, f.triple.2].contains(&b));
    let f = hit.ok_or("no condition-2 failure on (a,b)")?;
    let mut w: Vec<String> = f.witness.iter().map(|&v| name(v)).collect();
    w.sort();
    ensure(w == ["x", "y", "z"], format!("midpoint witness {w:?}"))?;
    times.push(within(t, LIMIT_FIXTURE)?);

    let t = Instant::now();
    let c8 = graphs::cycle(8);
    let cover = Cover::new(&c8, &[0, 2, 4, 6], &[1, 3, 5, 7]).map_err(|e| e.to_string())?;
    let r = well_split(&c8, &cover);
    ensure(!r.verdict && r.failures.first().map(|f| f.condition) == Some(1), "parity cover should fail condition 1")?;
    times.push(within(t, LIMIT_FIXTURE)?);
    Ok(times.join(", "))
}

fn c2_disconnection() -> Outcome {
    let t = Instant::now();
    let mut graphs_checked = 0;
    for n in 1..=5 {
        let pairs = n * (n - 1) / 2;
        for mask in 0..1u32 << pairs {
            let g = graph_from_mask(n, mask);
            let r = disconnected_iff_empty_intersection(&g).map_err(|e| e.to_string())?;
            ensure(r.holds, format!("counterexample: n={n} edges={mask:b}"))?;
            graphs_checked += 1;
        }
    }
    Ok(format!("{graphs_checked} graphs, {}", within(t, LIMIT_EXHAUSTIVE)?))
}

fn c3_which_side() -> Outcome {
    let t = Instant::now();
    let mut covers = 0;
    for n in 1..=5usize {
        let pairs = n * (n - 1) / 2;
        for mask in 0..1u32 << pairs {
            let g = graph_from_mask(n, mask);
            // Each vertex in A only, B only, or both.
            for code in 0..3usize.pow(n as u32) {
                let mut c = code;
                let mut a = vec![false; n];
                let mut b = vec![false; n];
                for v in 0..n {
                    a[v] = c % 3 != 1;
                    b[v] = c % 3 != 0;
                    c /= 3;
                }
                let Ok(cover) = Cover::from_masks(a, b) else { continue };
                covers += 1;
                let bad = which_side_check(&g, &cover);
                ensure(bad.is_empty(), format!("n={n} edges={mask:b} cover={code}: {bad:?}"))?;
            }
        }
    }
    Ok(format!("{covers} covers, {}", within(t, LIMIT_SWEEP)?))
}

fn c4_merge_chain() -> Outcome {
    let t = Instant::now();
    let c4 = Arc::new(Space::Finite(graphs::cycle(4)));
    let e1 = ZMap::new(c4.clone(), 0, vec![0, 1, 2, 3], Tail::Const(0), Tail::Const(0)).map_err(|e| e.to_string())?;
    let s = StringOfMaps::new(vec![e1.clone(), e1.shift(4), e1.shift(8)]).map_err(|e| e.to_string())?;
    let a = s.apply_merge(1, 4).and_then(|x| x.apply_merge(1, 8)).map_err(|e| e.to_string())?;
    let b = s.apply_merge(2, 8).and_then(|x| x.apply_merge(1, 4)).map_err(|e| e.to_string())?;
    let e3 = ZMap::from_path(c4.clone(), 0, &[0, 1, 2, 3, 0, 1, 2, 3, 0, 1, 2, 3, 0]).map_err(|e| e.to_string())?;
    ensure(a.maps() == [e3.clone()], format!("first order gave {:?}", a.maps()))?;
    ensure(b.maps() == [e3], format!("second order gave {:?}", b.maps()))?;
    let twice = StringOfMaps::new(vec![e1.clone(), e1]).map_err(|e| e.to_string())?;
    match twice.apply_merge(1, 2) {
        Err(Error::EmptyMergeWindow(..)) => {}
        other => return Err(format!("(e1,e1) merge: {other:?}")),
    }
    within(t, LIMIT_FIXTURE)
}

fn c5_groupoid_laws() -> Outcome {
    let t = Instant::now();
    let s = law_sample(LAW_SEED, LAW_STRINGS, BOUND);
    ensure(s.failures == 0 && s.unknown == 0, format!("{} failures: {:?}", s.failures, s.notes.iter().take(3).collect::<Vec<_>>()))?;
    Ok(format!("{} checks PROVED, {}", s.proved, within(t, LIMIT_LAWS)?))
}

fn c6_homotopy_translation() -> Outcome {
    let mut r = rng(6);
    for k in 0..HOMOTOPY_SAMPLES {
        let n = r.gen_range(1..=6);
        let space = Arc::new(Space::Finite(semicoarse::random::random_graph(&mut r, n)));
        let len = r.gen_range(2..=8);
        let rows = r.gen_range(1..=6);
        let h = random_homotopy(&mut r, &space, len, rows);
        let f = ZMap::from_path(space.clone(), 0, &h[0]).map_err(|e| e.to_string())?;
        let g = ZMap::from_path(space.clone(), 0, h.last().unwrap()).map_err(|e| e.to_string())?;
        let moves = semicoarse::homotopy::homotopy_to_dmoves(&f, &g, 0, &h).map_err(|e| format!("sample {k}: {e}"))?;
        let mut cur = f;
        for mv in &moves {
            cur = mv.apply(&cur).map_err(|e| format!("sample {k}, {mv}: {e}"))?;
            let window = cur.sample(cur.lo() - 3, cur.hi() + 3);
            ensure(is_path(&space, &window), format!("sample {k}: intermediate not bornologous"))?;
            let at = match mv {
                PointMove::Add { at, .. } | PointMove::Delete { at } => *at,
            };
            cur.check_guards(at).map_err(|e| format!("sample {k}: {e}"))?;
        }
        ensure(cur == g, format!("sample {k}: replay ends at {cur}, not {g}"))?;
    }
    Ok(format!("{HOMOTOPY_SAMPLES}/{HOMOTOPY_SAMPLES} replayed"))
}

fn c7_line_objects() -> Outcome {
    let line = Arc::new(Space::IntLine(Scale::Inf));
    let abs = |k: i64| ZMap::new(line.clone(), 0, vec![], Tail::affine(-k, 0, vec![0]), Tail::affine(k, 0, vec![0])).unwrap();
    let (f, g) = (abs(1), abs(2));
    match object_equal(&f, &g, BOUND).map_err(|e| e.to_string())? {
        Verdict::Refuted(why) => ensure(why.contains("slope"), format!("reason {why:?}"))?,
        other => return Err(format!("|z| vs 2|z|: {other:?}")),
    }
    ensure(!f.eventually_equal(&g).map_err(|e| e.to_string())?, "eventually equal")?;

    let k4 = Arc::new(Space::Finite(graphs::complete(4)));
    let mut r = rng(7);
    let mut pairs = 0;
    while pairs < 20 {
        let mut sym = || {
            let w: Vec<i64> = (0..r.gen_range(1..=3)).map(|_| r.gen_range(0..4)).collect();
            let mut rev = w.clone();
            rev.reverse();
            let half: Vec<i64> = (0..r.gen_range(0..=2)).map(|_| r.gen_range(0..4)).collect();
            let mut vals = half.clone();
            vals.push(r.gen_range(0..4));
            vals.extend(half.iter().rev());
            let lo = -(half.len() as i64);
            ZMap::new(k4.clone(), lo, vals, Tail::periodic(w.iter().rev().copied().collect()), Tail::periodic(w))
        };
        let (Ok(a), Ok(b)) = (sym(), sym()) else { continue };
        if !a.is_symmetric() || !b.is_symmetric() {
            continue;
        }
        pairs += 1;
        let v = object_equal(&a, &b, BOUND).map_err(|e| e.to_string())?;
        ensure(v.is_proved(), format!("{a} vs {b}: {}", v.name()))?;
    }
    Ok(format!("{pairs} symmetric pairs on K4 PROVED"))
}

fn c8_half_lines() -> Outcome {
    let r = well_split_half_lines(Scale::Inf, &LineRegion::AtLeast(0), &LineRegion::AtMost(0)).map_err(|e| e.to_string())?;
    ensure(r.verdict, "half-line cover not well-split")?;
    let line = Space::IntLine(Scale::Inf);
    for k in 1..=HALF_LINE_K {
        ensure(line.controlled(-k, k), format!("(-{k},{k}) not controlled"))?;
        ensure(!r.in_pushout(-k, k), format!("(-{k},{k}) in the pushout structure"))?;
    }
    Ok(format!("k = 1..{HALF_LINE_K}"))
}

fn c9_factorization() -> Outcome {
    let six = fixtures::six_vertex();
    let cover = fixtures::six_vertex_cover(&six);
    let space = Arc::new(Space::Finite(six));
    let mut r = rng(9);
    for k in 0..CROSSING_SAMPLES {
        let f = random_crossing_map(&mut r, &space, &cover).map_err(|e| e.to_string())?;
        let fz = factorize(&f, &cover).map_err(|e| format!("map {k} ({f}): {e}"))?;
        for (m, tag) in fz.string.maps().iter().zip(&fz.tags) {
            let set = if *tag == Side::A { &cover.a } else { &cover.b };
            let mut vals = m.values().to_vec();
            vals.extend(m.left().image().unwrap_or_default());
            vals.extend(m.right().image().unwrap_or_default());
            ensure(vals.iter().all(|&v| set[v as usize]), format!("map {k}: factor {m} leaves {tag:?}"))?;
        }
        for w in fz.string.maps().windows(2) {
            ensure(w[0].right().constant_value().is_some() && w[0].right() == w[1].left(), format!("map {k}: tails {} / {}", w[0], w[1]))?;
        }
        let start = StringOfMaps::new(vec![f.clone()]).map_err(|e| e.to_string())?;
        let end = fz.trace.replay(&start).map_err(|e| format!("map {k}: replay {e}"))?;
        ensure(end.same_maps(&fz.string), format!("map {k}: replay mismatch"))?;
    }
    Ok(format!("{CROSSING_SAMPLES}/{CROSSING_SAMPLES} maps"))
}

/// Every generating move applicable to each curated string.
fn generating_moves(s: &StringOfMaps, space: &FiniteSpace) -> Vec<Step> {
    let mut out = Vec::new();
    for (i, f) in s.maps().iter().enumerate() {
        for z in f.lo()..=f.hi() {
            out.push(Step::Point { map: i + 1, mv: PointMove::Delete { at: z } });
        }
    }
    for after in 0..=s.len() {
        let c = if after == 0 { s.maps()[0].left() } else { s.maps()[after - 1].right() };
        let Some(c) = c.constant_value() else { continue };
        for v in space.closed_neighbors(c as usize) {
            if v as i64 == c {
                continue;
            }
            if let Ok(h) = ZMap::from_path(s.maps()[0].space_arc().clone(), 0, &[c, v as i64, c]) {
                out.push(Step::InsertOpposite { after, map: h, shift: 0 });
            }
        }
    }
    for at in 1..s.len() {
        out.push(Step::Dop { at });
        for point in -4..=8 {
            out.push(Step::Merge { at, point });
        }
    }
    out.retain(|step| s.apply(step).is_ok());
    out
}

fn c10_relation_preservation() -> Outcome {
    let t = Instant::now();
    let fx = parse_fixture(&std::fs::read_to_string(corpus_dir().join("vk_six.json")).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let six = fx.finite().map_err(|e| e.to_string())?.clone();
    let cover = fx.finite_cover().map_err(|e| e.to_string())?;
    let atlas = fx.atlas().map_err(|e| e.to_string())?.to_vec();
    let (mut moves, mut crossing, mut plain, mut merges) = (0, 0, 0, 0);
    for s in &fx.strings {
        for step in generating_moves(s, &six) {
            if let Step::Point { map, mv: PointMove::Delete { at } } = &step {
                let f = &s.maps()[map - 1];
                let (u, v) = (f.eval(*at - 1) as usize, f.eval(*at) as usize);
                if cover.in_pushout(&six, u, v) {
                    plain += 1;
                } else {
                    crossing += 1;
                }
            }
            if matches!(step, Step::Merge { .. }) {
                merges += 1;
            }
            let v = relation_preservation_test(s, &step, &cover, &atlas, BOUND).map_err(|e| format!("{step}: {e}"))?;
            ensure(v.is_proved(), format!("{step}: {}", v.name()))?;
            moves += 1;
        }
    }
    ensure(crossing > 0 && plain > 0, format!("deletions: {crossing} crossing, {plain} non-crossing"))?;
    ensure(merges > 0, "no valid merge in the curated set")?;
    Ok(format!("{moves} moves PROVED ({merges} merges), {}", within(t, LIMIT_VK)?))
}

fn c11_pi1() -> Outcome {
    for g in [graphs::path(1), graphs::cycle(3)] {
        let space = Space::Finite(g.clone());
        let c = pi1_classes(&space, 0, 8).map_err(|e| e.to_string())?;
        ensure(c.class_count() == 1, format!("{} classes on {} vertices", c.class_count(), g.len()))?;
        ensure(semicoarse::oracle::loop_class_count(&g, 0, 8) == 1, "oracle disagrees")?;
    }
    let mut unstable = Vec::new();
    for name in ["c4_pi1.json", "c5_pi1.json"] {
        let fx = parse_fixture(&std::fs::read_to_string(corpus_dir().join(name)).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let base = fx.basepoint.ok_or("no basepoint")?;
        for e in &fx.expect {
            let Check::Pi1 { length_cap, classes } = e.check else { continue };
            if length_cap < 10 {
                continue;
            }
            let c = pi1_classes(&fx.space, base, length_cap).map_err(|e| e.to_string())?;
            ensure(c.class_count() == classes, format!("{name} cap {length_cap}: {} vs oracle {classes}", c.class_count()))?;
            if !c.stabilization_flag {
                unstable.push(format!("{} cap {}: {} -> {}", fx.name, length_cap, c.previous_count.unwrap_or(0), c.class_count()));
            }
            let images = c
                .classes
                .iter()
                .map(|k| pi1_embedding(fx.space.clone(), base as i64, &k.representative))
                .collect::<semicoarse::Result<Vec<_>>>()
                .map_err(|e| e.to_string())?;
            for i in 0..images.len() {
                for j in i + 1..images.len() {
                    let v = string_equiv(&images[i], &images[j], BOUND).map_err(|e| e.to_string())?;
                    ensure(!v.is_proved(), format!("{name} cap {length_cap}: classes {i} and {j} embed equal"))?;
                }
            }
        }
    }
    ensure(unstable.is_empty(), format!("counts not stable from cap-2: {}", unstable.join("; ")))?;
    Ok("counts match oracle and are stable".into())
}

fn c12_determinism() -> Outcome {
    let dir = corpus_dir();
    let a = corpus_run(&dir, Some(12), DEFAULT_BOUND).map_err(|e| e.to_string())?;
    let b = corpus_run(&dir, Some(12), DEFAULT_BOUND).map_err(|e| e.to_string())?;
    let (ja, jb) = (serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    ensure(ja == jb, "reports differ")?;
    ensure(a.ok(), format!("{} corpus checks failed", a.failed))?;
    Ok(format!("{} bytes identical", ja.len()))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("well-splitting fixtures", c1_well_splitting),
        ("disconnected iff an empty-intersection cover is well-split", c2_disconnection),
        ("which-side sweep", c3_which_side),
        ("C4 merge chain", c4_merge_chain),
        ("groupoid laws", c5_groupoid_laws),
        ("homotopy to point moves", c6_homotopy_translation),
        ("integer-line objects", c7_line_objects),
        ("half-line cover", c8_half_lines),
        ("factorization", c9_factorization),
        ("relation preservation", c10_relation_preservation),
        ("loop classes", c11_pi1),
        ("determinism", c12_determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                println!("FAIL {:>2} {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
