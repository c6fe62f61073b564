mod common;

use std::fs;
use std::path::{Path, PathBuf};

use wivi::cli::{self, EXIT_INPUT, EXIT_OK, EXIT_USAGE};
use wivi::io::*;
use wivi::prelude::*;
use wivi::Error;

const CONFIG: &str = r#"
[imaging]
sanitize = false
tof_grid_ns = [0.0, 5.0, 10.0, 15.0, 20.0, 25.0]
aod_grid_deg = [40.0, 60.0, 80.0, 120.0]

[enhance]
static_window = 30
"#;

fn scene_toml(duration: f64, el_span: f64) -> String {
    format!(
        r#"
[simulation]
snr_db = 25.0
duration_s = {duration}
seed = 1

[[path]]
tag = "los"
azimuth_deg = 90.0
elevation_deg = 90.0
tof_ns = 0.0
aod_deg = 80.0
phase_jitter_rad = 3.14159

[[persona]]
name = "walker"
elevation_span_deg = {el_span}
azimuth_span_deg = 10.0
gait_period_s = 0.8
start_azimuth_deg = 40.0
end_azimuth_deg = 80.0
walk_speed_mps = 0.0
gain_db = -3.0
"#
    )
}

fn wivi(args: &[&str]) -> i32 {
    let mut v = vec!["wivi"];
    v.extend_from_slice(args);
    cli::run(v)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn dir_bytes(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            let b = fs::read(&p).unwrap();
            (p.file_name().unwrap().into(), b)
        })
        .collect();
    v.sort();
    v
}

#[test]
fn csif_file_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let stream = common::single_path_stream(common::hyp(60.0, 45.0, 20.0, 60.0), 20.0, 20, 4);
    let p = tmp.path().join("a.csif");
    write_csif(&stream, &p).unwrap();
    let h = decode_header(&fs::read(&p).unwrap()).unwrap();
    assert_eq!((h.n_rx, h.n_tx, h.n_su, h.packet_count), (9, 3, 30, 20));
    assert_eq!(
        fs::metadata(&p).unwrap().len() as usize,
        HEADER_LEN + 20 * h.packet_len()
    );
    let back = read_csif(&p).unwrap();
    assert_eq!(back.len(), 20);
    for (a, b) in stream.frames().iter().zip(back.frames()) {
        assert_eq!(a.timestamp_ns, b.timestamp_ns);
        for (x, y) in a.tensor().iter().zip(b.tensor()) {
            assert_eq!(x.re as f32, y.re as f32);
            assert_eq!(x.im as f32, y.im as f32);
        }
    }
    let q = tmp.path().join("b.csif");
    write_csif(&back, &q).unwrap();
    assert_eq!(fs::read(&p).unwrap(), fs::read(&q).unwrap());
}

#[test]
fn spectrum_export_examples() {
    let zero = encode_pgm(&Spectrum2D::zeros(0));
    let header = b"P5\n180 180\n255\n";
    assert_eq!(&zero[..header.len()], header);
    assert_eq!(zero.len(), header.len() + 32400);
    assert!(zero[header.len()..].iter().all(|&b| b == 0));

    // a single bright pixel at azimuth 60°, elevation 45°
    let one = Spectrum2D::from_fn(0, |a, e| if (a, e) == (59, 44) { 2.5 } else { 0.0 }).unwrap();
    let pgm = encode_pgm(&one);
    let body = &pgm[header.len()..];
    let at = (179 - 44) * 180 + 59;
    assert_eq!(body[at], 255);
    assert_eq!(body.iter().filter(|&&b| b != 0).count(), 1);

    let csv = encode_csv(&one);
    let lines: Vec<_> = csv.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 32401);
    assert!(lines.contains(&"60,45,2.5"));
    assert_eq!(decode_csv(&csv, 0).unwrap().values(), one.values());

    let tmp = tempfile::tempdir().unwrap();
    save_spectrum(&one, tmp.path().join("x.pgm")).unwrap();
    save_spectrum(&one, tmp.path().join("x.csv")).unwrap();
    assert_eq!(fs::read(tmp.path().join("x.pgm")).unwrap(), pgm);
    assert!(save_spectrum(&one, tmp.path().join("x.png")).is_err());
}

#[test]
fn scene_files_are_strict() {
    let tmp = tempfile::tempdir().unwrap();
    let good = tmp.path().join("good.toml");
    fs::write(&good, scene_toml(0.1, 20.0)).unwrap();
    let setup = load_scene(&good).unwrap();
    assert_eq!(setup.geometry.dim(), 810);
    assert_eq!(setup.scene.paths.len(), 1 + 5 + 1);

    let bad = tmp.path().join("bad.toml");
    fs::write(&bad, scene_toml(0.1, 20.0).replace("gain_db", "gain_dB")).unwrap();
    match load_scene(&bad) {
        Err(Error::Config { message, .. }) => assert!(message.contains("gain_dB"), "{message}"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn exit_codes() {
    assert_eq!(wivi(&[]), EXIT_USAGE);
    assert_eq!(wivi(&["simulate", "--scene"]), EXIT_USAGE);
    assert_eq!(wivi(&["--help"]), EXIT_OK);
    assert_eq!(
        wivi(&["spectrum", "--in", "/nonexistent.csif", "--out", "/tmp/x"]),
        EXIT_INPUT
    );

    let tmp = tempfile::tempdir().unwrap();
    let trunc = tmp.path().join("t.csif");
    let stream = common::single_path_stream(common::hyp(60.0, 45.0, 20.0, 60.0), 20.0, 5, 4);
    let mut bytes = Vec::new();
    write_csif_to(&stream, &mut bytes).unwrap();
    fs::write(&trunc, &bytes[..bytes.len() - 10]).unwrap();
    assert_eq!(
        wivi(&[
            "spectrum",
            "--in",
            s(&trunc),
            "--out",
            s(&tmp.path().join("o"))
        ]),
        EXIT_INPUT
    );
    let scene = tmp.path().join("s.toml");
    fs::write(&scene, scene_toml(0.05, 20.0)).unwrap();
    let out = tmp.path().join("s.csif");
    assert_eq!(
        wivi(&[
            "--threads",
            "0",
            "simulate",
            "--scene",
            s(&scene),
            "--out",
            s(&out)
        ]),
        EXIT_INPUT
    );
}

#[test]
fn spectra_do_not_depend_on_thread_count() {
    let tmp = tempfile::tempdir().unwrap();
    let t = tmp.path();
    fs::write(t.join("scene.toml"), scene_toml(0.2, 20.0)).unwrap();
    fs::write(t.join("cfg.toml"), CONFIG).unwrap();
    let csif = t.join("s.csif");
    assert_eq!(
        wivi(&[
            "simulate",
            "--scene",
            s(&t.join("scene.toml")),
            "--out",
            s(&csif),
            "--inject-offsets"
        ]),
        0
    );
    for n in ["1", "2"] {
        let out = t.join(format!("spec{n}"));
        let cfg = t.join("cfg.toml");
        let args = [
            "--threads",
            n,
            "--config",
            s(&cfg),
            "spectrum",
            "--in",
            s(&csif),
            "--out",
            s(&out),
        ];
        assert_eq!(wivi(&args), 0);
    }
    let (a, b) = (dir_bytes(&t.join("spec1")), dir_bytes(&t.join("spec2")));
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn end_to_end_through_the_cli() {
    let tmp = tempfile::tempdir().unwrap();
    let t = tmp.path();
    let cfg = t.join("cfg.toml");
    fs::write(&cfg, CONFIG).unwrap();
    for (who, span) in [("tall", 50.0), ("short", 20.0)] {
        let scene = t.join(format!("{who}.toml"));
        fs::write(&scene, scene_toml(2.0, span)).unwrap();
        for (set, seed) in [("gallery", "10"), ("probes", "20")] {
            let csif = t.join(format!("{who}-{set}.csif"));
            let spectra = t.join(format!("{who}-{set}-spectra"));
            let enhanced = t.join(set).join(who);
            assert_eq!(
                wivi(&[
                    "--seed",
                    seed,
                    "simulate",
                    "--scene",
                    s(&scene),
                    "--out",
                    s(&csif)
                ]),
                0
            );
            assert_eq!(
                wivi(&[
                    "--config",
                    s(&cfg),
                    "spectrum",
                    "--in",
                    s(&csif),
                    "--out",
                    s(&spectra)
                ]),
                0
            );
            assert_eq!(
                wivi(&[
                    "--config",
                    s(&cfg),
                    "enhance",
                    "--in",
                    s(&spectra),
                    "--out",
                    s(&enhanced)
                ]),
                0
            );
            assert!(enhanced.join(INDEX_FILE).exists());
            assert!(enhanced.join("frame_00000.pgm").exists());
        }
    }
    let agg = t.join("agg.csv");
    let enhanced = t.join("gallery").join("tall");
    assert_eq!(
        wivi(&[
            "aggregate",
            "--in",
            s(&enhanced),
            "--frames",
            "15",
            "--out",
            s(&agg)
        ]),
        0
    );
    let img = load_spectrum_csv(&agg, 0).unwrap();
    let track = read_spectrum_dir(&enhanced).unwrap();
    assert_eq!(img.values(), aggregate(&track, 15).unwrap().values());

    let cmc_path = t.join("cmc.csv");
    let (gallery, probes) = (t.join("gallery"), t.join("probes"));
    let args = [
        "reid",
        "--gallery",
        s(&gallery),
        "--probes",
        s(&probes),
        "--cmc",
        s(&cmc_path),
    ];
    assert_eq!(wivi(&args), 0);
    let text = fs::read_to_string(&cmc_path).unwrap();
    assert!(text.starts_with("k,accuracy\n1,"));
    assert!(text.ends_with("2,1\n"), "{text}");

    // a probe with no gallery identity is an input error
    fs::rename(
        t.join("probes").join("short"),
        t.join("probes").join("stranger"),
    )
    .unwrap();
    assert_eq!(wivi(&args), EXIT_INPUT);
}

#[test]
fn pipeline_writes_every_artifact() {
    let tmp = tempfile::tempdir().unwrap();
    let t = tmp.path();
    fs::write(t.join("scene.toml"), scene_toml(0.4, 30.0)).unwrap();
    fs::write(t.join("cfg.toml"), CONFIG).unwrap();
    let out = t.join("run");
    let (cfg, scene) = (t.join("cfg.toml"), t.join("scene.toml"));
    let args = [
        "--config",
        s(&cfg),
        "pipeline",
        "--scene",
        s(&scene),
        "--out",
        s(&out),
    ];
    assert_eq!(wivi(&args), 0);
    for f in [
        "stream.csif",
        "aggregate.pgm",
        "aggregate.csv",
        "peaks.csv",
        "spectra/index.csv",
        "enhanced/index.csv",
    ] {
        assert!(out.join(f).exists(), "{f}");
    }
    assert_eq!(read_spectrum_dir(out.join("spectra")).unwrap().len(), 10);
    assert!(fs::read_to_string(out.join("peaks.csv"))
        .unwrap()
        .starts_with("azimuth,elevation,power\n"));
}
