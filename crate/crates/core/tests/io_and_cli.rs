mod common;

use std::fs;
use std::process::{Command, Output};

use common::*;
use lester::maskio::{
    load_mask_sequence, parse_manifest, read_rgba_png, write_mask_png, write_mask_sequence,
    FrameSequence, LabelMask,
};
use lester::Error;

fn lester(args: &[&std::ffi::OsStr]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lester"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn clip_args<'a>(clip: &'a Clip, sub: &'a str, out: &'a std::path::Path) -> Vec<std::ffi::OsString> {
    vec![
        sub.into(),
        "--masks".into(),
        clip.masks().into(),
        "--manifest".into(),
        clip.manifest().into(),
        "--palette".into(),
        clip.palette().into(),
        "--out".into(),
        out.into(),
    ]
}

fn run(args: Vec<std::ffi::OsString>) -> Output {
    let refs: Vec<&std::ffi::OsStr> = args.iter().map(|a| a.as_os_str()).collect();
    lester(&refs)
}

fn figures(n: u32) -> Vec<LabelMask> {
    (0..n).map(|i| figure_frame(96, 96, i, [1, 2, 3])).collect()
}

#[test]
fn sequence_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let seq = FrameSequence::new(figures(3), 24.0).unwrap();
    write_mask_sequence(&seq, dir.path()).unwrap();
    let table = parse_manifest(MANIFEST.as_bytes()).unwrap();
    assert_eq!(load_mask_sequence(dir.path(), &table).unwrap(), seq);
}

#[test]
fn sequence_gap_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let f = LabelMask::empty(8, 8);
    write_mask_png(&f, &dir.path().join("frame_0000.png")).unwrap();
    write_mask_png(&f, &dir.path().join("frame_0002.png")).unwrap();
    let table = parse_manifest(MANIFEST.as_bytes()).unwrap();
    let err = load_mask_sequence(dir.path(), &table).unwrap_err();
    assert!(err.to_string().contains("missing frame_0001"), "{err}");
}

#[test]
fn unknown_label_names_frame_and_label() {
    let dir = tempfile::tempdir().unwrap();
    for i in 0..3 {
        let mut f = LabelMask::empty(8, 8);
        if i == 2 {
            f.set(4, 4, 7);
        }
        write_mask_png(&f, &dir.path().join(format!("frame_{i:04}.png"))).unwrap();
    }
    let table = parse_manifest(MANIFEST.as_bytes()).unwrap();
    let err = load_mask_sequence(dir.path(), &table).unwrap_err();
    assert_eq!(err.to_string(), "frame 2: unknown label 7");
}

#[test]
fn mixed_dimensions_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    write_mask_png(&LabelMask::empty(8, 8), &dir.path().join("frame_0000.png")).unwrap();
    write_mask_png(&LabelMask::empty(8, 9), &dir.path().join("frame_0001.png")).unwrap();
    let table = parse_manifest(MANIFEST.as_bytes()).unwrap();
    let err = load_mask_sequence(dir.path(), &table).unwrap_err();
    assert!(matches!(err, Error::Dimension { .. }), "{err}");
}

#[test]
fn validate_accepts_good_inputs() {
    let clip = Clip::new(&figures(3), MANIFEST, PALETTE);
    let out = clip.path("out");
    let o = run(clip_args(&clip, "validate", &out));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(!out.exists());
}

#[test]
fn validate_lists_every_problem() {
    let palette = r##"{"1": "#3060C0", "2": "#F0C8A0"}"##;
    let clip = Clip::new(&figures(3), MANIFEST, palette);
    let lm = landmarks_json(&[
        (0, face_landmarks(36.0, 32.0)),
        (2, face_landmarks(36.0, 32.0)[..67].to_vec()),
    ]);
    let lm_path = clip.write("landmarks.json", &lm);
    let mut args = clip_args(&clip, "validate", &clip.path("out"));
    args.extend(["--landmarks".into(), lm_path.into()]);
    let o = run(args);
    assert_eq!(o.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("no color for label 3"), "{stdout}");
    assert!(stdout.contains("frame 2: expected 68 landmarks, got 67"), "{stdout}");
}

#[test]
fn run_fails_on_missing_palette_color() {
    let palette = r##"{"1": "#3060C0", "2": "#F0C8A0"}"##;
    let clip = Clip::new(&figures(2), MANIFEST, palette);
    let out = clip.path("out");
    let o = run(clip_args(&clip, "run", &out));
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no color for label 3"));
    assert!(!out.join("out_0000.png").exists());
}

#[test]
fn all_background_clip_renders_transparent_frames() {
    let frames = vec![LabelMask::empty(24, 16); 3];
    let clip = Clip::new(&frames, MANIFEST, PALETTE);
    let out = clip.path("out");
    let mut args = clip_args(&clip, "run", &out);
    args.push("--report".into());
    let o = run(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for i in 0..3 {
        let img = read_rgba_png(&out.join(format!("out_{i:04}.png"))).unwrap();
        assert!(img.as_bytes().iter().all(|&b| b == 0));
    }
    let report: serde_json::Value =
        serde_json::from_slice(&fs::read(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["label_flip_count"], 0);
    assert_eq!(report["frames"], 3);
}

#[test]
fn optional_outputs_are_written() {
    let clip = Clip::new(&figures(2), MANIFEST, PALETTE);
    let out = clip.path("out");
    let mut args = clip_args(&clip, "run", &out);
    args.extend(["--guide".into(), "--dump-contours".into(), "--report".into()]);
    let o = run(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["out_0001.png", "guide_0001.png", "contours_0001.json", "report.json"] {
        assert!(out.join(name).exists(), "{name}");
    }
    let dump: serde_json::Value =
        serde_json::from_slice(&fs::read(out.join("contours_0000.json")).unwrap()).unwrap();
    let labels: Vec<i64> = dump
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["label_id"].as_i64().unwrap())
        .collect();
    assert!(labels.contains(&1) && labels.contains(&2) && labels.contains(&3));
}

#[test]
fn flags_override_config_file() {
    let clip = Clip::new(&figures(2), MANIFEST, PALETTE);
    let out = clip.path("out");
    let config = format!(
        r#"{{"masks": {:?}, "manifest": {:?}, "palette": {:?}, "out": {:?}, "pixelate": 500}}"#,
        clip.masks(),
        clip.manifest(),
        clip.palette(),
        out
    );
    let cfg = clip.write("config.json", &config);
    let o = lester(&["run".as_ref(), "--config".as_ref(), cfg.as_os_str()]);
    assert_eq!(o.status.code(), Some(1), "config value is used without flags");
    assert!(String::from_utf8_lossy(&o.stderr).contains("pixelate factor 500"));

    let o = lester(&[
        "run".as_ref(),
        "--config".as_ref(),
        cfg.as_os_str(),
        "--pixelate".as_ref(),
        "2".as_ref(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("out_0001.png").exists());
}

#[test]
fn unwritable_output_is_a_runtime_failure() {
    let clip = Clip::new(&figures(1), MANIFEST, PALETTE);
    let out = clip.write("not_a_dir", "");
    let o = run(clip_args(&clip, "run", &out));
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn missing_required_input_fails_validation() {
    let o = lester(&["run".as_ref(), "--masks".as_ref(), "x".as_ref()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing --manifest"));
}
