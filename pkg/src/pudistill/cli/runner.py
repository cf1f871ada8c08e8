"""Pipeline orchestration shared by the CLI commands and sweeps."""

import hashlib
import json
import os
from dataclasses import dataclass

import numpy as np

from ..data import evaluation
from ..data.augment import augment_batch
from ..data.glyphs import write_glyph_corpus
from ..data.idx import load_idx
from ..data.splits import EpochShuffler, make_pu_split
from ..data.synthetic import synth_generate
from ..data.types import LabeledSet, UnlabeledPool
from ..distill.evaluate import evaluate_accuracy
from ..distill.train import prepare_distillation, run_distillation
from ..errors import BudgetError, ConfigError, ShapeError
from ..nn.checkpoint import load_checkpoint, save_checkpoint
from ..nn.functional import soft_cross_entropy_rows, softmax_temperature
from ..nn.layers import Conv2d, Dense, Flatten, MaxPool2x2, ReLU
from ..nn.network import Network
from ..nn.optim import OptimizerState, sgd_step
from ..nn.tensor import derive_seed, seeded_rng
from ..pu.classifier import build_pu_classifier
from ..pu.select import extend_dataset, select_positives, write_index_file
from ..pu.train import train_pu_classifier
from .config import canonical_config_bytes
from .metrics import write_csv


@dataclass
class ExperimentData:
    train: LabeledSet
    test: LabeledSet
    pool: UnlabeledPool


def _stable_key(payload):
    return hashlib.sha256(
        json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    ).hexdigest()[:16]


def load_experiment_data(cfg, cache_root=None):
    """Materialize train/test/pool for the configured data kind.

    Glyph corpora are rendered to IDX files once per parameter set and
    re-read through the IDX parser on later runs, so every experiment
    exercises the ingestion path.
    """
    data = cfg["data"]
    seed = cfg["seed"]
    kind = data["kind"]
    if kind == "glyphs":
        fraction = data["pool_positive_fraction"]
        if fraction is None:
            fraction = data["class_prior"]
        params = {
            "n_train": data["n_train"],
            "n_test": data["n_test"],
            "pool_size": data["pool_size"],
            "pool_positive_fraction": fraction,
            "seed": seed,
        }
        root = data["cache_dir"] or cache_root or os.path.join(cfg["output_dir"], "corpus")
        corpus_dir = os.path.join(root, _stable_key(params))
        params_path = os.path.join(corpus_dir, "params.json")
        if not os.path.exists(params_path):
            write_glyph_corpus(corpus_dir, **params)
        return _load_idx_corpus(corpus_dir)
    if kind == "gaussians":
        return _build_gaussian_data(data, seed)
    if kind == "idx":
        return _load_user_idx(data)
    raise ConfigError("data.kind", f"unhandled kind {kind!r}")


def _load_idx_corpus(corpus_dir):
    def imgs(name):
        kind, arr = load_idx(os.path.join(corpus_dir, name))
        if kind != "images":
            raise ShapeError(f"{name}: expected an image file")
        return arr[..., None]

    def labels(name):
        kind, arr = load_idx(os.path.join(corpus_dir, name))
        if kind != "labels":
            raise ShapeError(f"{name}: expected a label file")
        return arr

    train = LabeledSet(imgs("digits-train-images.idx"), labels("digits-train-labels.idx"), 10)
    test = LabeledSet(imgs("digits-test-images.idx"), labels("digits-test-labels.idx"), 10)
    pool = UnlabeledPool(imgs("pool-images.idx"), sealed_labels=labels("pool-sealed.idx"))
    return ExperimentData(train, test, pool)


def _build_gaussian_data(data, seed):
    classes = data["classes"]
    positive = sorted(set(data["positive_classes"]))
    if any(k < 0 or k >= classes for k in positive):
        raise ConfigError("data.positive_classes", f"indices must be in [0, {classes})")
    original = synth_generate(
        classes, data["per_class"], data["separation"], derive_seed(seed, "gauss-original"), std=data["std"]
    )
    held_out = synth_generate(
        classes, max(1, data["per_class"] // 4), data["separation"], derive_seed(seed, "gauss-test"), std=data["std"]
    )
    pool_src = synth_generate(
        classes, data["pool_per_class"], data["separation"], derive_seed(seed, "gauss-pool"), std=data["std"]
    )

    def concept_subset(dataset, role):
        keep = np.nonzero(np.isin(dataset.labels, positive))[0]
        relabel = {k: i for i, k in enumerate(positive)}
        labels = np.array([relabel[int(l)] for l in dataset.labels[keep]], dtype=np.int64)
        return LabeledSet(dataset.images[keep], labels, len(positive), role=role, raw_features=True)

    train = concept_subset(original, "original")
    test = concept_subset(held_out, "original")
    sealed = np.isin(pool_src.labels, positive).astype(np.int64)
    order = seeded_rng(seed, "gauss-pool-shuffle").permutation(len(pool_src))
    pool = UnlabeledPool(pool_src.images[order], sealed_labels=sealed[order], raw_features=True)
    return ExperimentData(train, test, pool)


def _load_user_idx(data):
    for key in ("train_images", "train_labels", "test_images", "test_labels", "pool_images"):
        if not data[key]:
            raise ConfigError(f"data.{key}", "required for kind=idx")

    def read(path, expect):
        kind, arr = load_idx(path)
        if kind != expect:
            raise ShapeError(f"{path}: expected {expect}, found {kind}")
        return arr

    k = data["num_classes"]
    train = LabeledSet(read(data["train_images"], "images")[..., None], read(data["train_labels"], "labels"), k)
    test = LabeledSet(read(data["test_images"], "images")[..., None], read(data["test_labels"], "labels"), k)
    sealed = read(data["pool_sealed"], "labels") if data["pool_sealed"] else None
    pool = UnlabeledPool(read(data["pool_images"], "images")[..., None], sealed_labels=sealed)
    return ExperimentData(train, test, pool)


def build_classifier_network(geometry, num_classes, conv_channels, dense_widths, rng):
    """LeNet-style stack for images, a plain MLP for 1x1 feature grids."""
    h, w, c = geometry
    d1, d2 = dense_widths
    if h > 1 and w > 1:
        c1, c2 = conv_channels
        h2, w2 = ((h - 4) // 2 - 4) // 2, ((w - 4) // 2 - 4) // 2
        layers = [
            Conv2d(5, 5, c, c1, rng),
            ReLU(),
            MaxPool2x2(),
            Conv2d(5, 5, c1, c2, rng),
            ReLU(),
            MaxPool2x2(),
            Flatten(),
            Dense(h2 * w2 * c2, d1, rng),
            ReLU(),
            Dense(d1, d2, rng),
            ReLU(),
            Dense(d2, num_classes, rng),
        ]
    else:
        层 = None  # noqa: F841 - removed below
        layers = [
            Flatten(),
            Dense(h * w * c, d1, rng),
            ReLU(),
            Dense(d1, d2, rng),
            ReLU(),
            Dense(d2, num_classes, rng),
        ]
    return Network(layers)


def halved_widths(values):
    return [max(1, v // 2) for v in values]


def _optimizer(section):
    return OptimizerState(
        learning_rate=section["learning_rate"],
        momentum=section["momentum"],
        weight_decay=section["weight_decay"],
        schedule_step=section["schedule_step"],
    )


def train_supervised(network, train_set, section, seed, augment=False):
    """Teacher training: cross-entropy against one-hot targets."""
    optimizer = _optimizer(section)
    shuffler = EpochShuffler(len(train_set), section["batch_size"], seed, "teacher-batches")
    aug_rng = seeded_rng(seed, "teacher-augment")
    onehot = np.eye(train_set.num_classes)[train_set.labels]
    for epoch in range(section["epochs"]):
        for batch in shuffler.epoch_batches():
            xb = train_set.images[batch]
            if augment:
                xb = augment_batch(xb, aug_rng, flip=False)
            targets = onehot[batch]
            logits = network.forward(xb)
            probs = softmax_temperature(logits, 1.0)
            dlogits = (probs - targets) / xb.shape[0]
            network.zero_grad()
            network.backward(dlogits)
            sgd_step(network.params(), optimizer, epoch)
    return network


def ensure_teacher(cfg, data, shared_dir, teacher_path=None):
    """Load the teacher checkpoint or train and cache one.

    The cache key covers the data generation parameters, the teacher
    hyperparameters and the seed, so sweeps reuse a single teacher.
    """
    if teacher_path:
        return load_checkpoint(teacher_path), teacher_path
    key = _stable_key({"data": cfg["data"], "teacher": cfg["teacher"], "seed": cfg["seed"]})
    os.makedirs(shared_dir, exist_ok=True)
    path = os.path.join(shared_dir, f"teacher-{key}.ckpt")
    if os.path.exists(path):
        return load_checkpoint(path), path
    section = cfg["teacher"]
    rng = seeded_rng(cfg["seed"], "teacher-init")
    network = build_classifier_network(
        data.train.geometry,
        data.train.num_classes,
        section["conv_channels"],
        section["dense_widths"],
        rng,
    )
    train_supervised(network, data.train, section, cfg["seed"], augment=cfg["data"]["augment"])
    save_checkpoint(network, path)
    return network, path


def run_train_pu(cfg, data, out_dir, prior_override=None, n_l_override=None):
    """Stage one: train the PU classifier, write checkpoint and step log."""
    os.makedirs(out_dir, exist_ok=True)
    section = cfg["pu"]
    prior = prior_override if prior_override is not None else cfg["data"]["class_prior"]
    n_l = n_l_override if n_l_override is not None else cfg["data"]["n_labeled_per_class"]
    split = make_pu_split(data.train, n_l, data.pool, prior, seed=cfg["seed"])
    rng = seeded_rng(cfg["seed"], "pu-init")
    classifier = build_pu_classifier(
        split.positives.geometry,
        rng,
        conv_channels=tuple(section["conv_channels"]),
        dense_width=section["dense_width"],
        attention_ratio=section["attention_ratio"],
        attention=section["attention"],
    )
    optimizer = _optimizer(section)
    log_rows = []
    train_pu_classifier(
        classifier,
        split,
        optimizer,
        epochs=section["epochs"],
        batch_size=section["batch_size"],
        seed=cfg["seed"],
        gamma=section["gamma"],
        iters_per_epoch=section["iters_per_epoch"],
        log_rows=log_rows,
    )
    ckpt_path = os.path.join(out_dir, "pu-classifier.ckpt")
    save_checkpoint(classifier, ckpt_path)
    write_csv(
        os.path.join(out_dir, "pu-train-log.csv"),
        ["epoch", "iter", "branch", "t", "risk"],
        log_rows,
    )
    return classifier, split, log_rows


def run_select(cfg, classifier, data, out_dir, prior_override=None, n_l_override=None):
    """Stage two: pick pool positives, write index file and summary."""
    os.makedirs(out_dir, exist_ok=True)
    n_l = n_l_override if n_l_override is not None else cfg["data"]["n_labeled_per_class"]
    prior = prior_override if prior_override is not None else cfg["data"]["class_prior"]
    split = make_pu_split(data.train, n_l, data.pool, prior, seed=cfg["seed"])
    selected = select_positives(classifier, split.pool)
    index_path = os.path.join(out_dir, "selected-indices.txt")
    write_index_file(index_path, selected)
    summary = {"selected_count": int(selected.size), "pool_size": len(split.pool)}
    if split.pool.has_sealed_labels():
        precision, recall = evaluation.selection_precision_recall(split.pool, selected)
        summary["precision"] = precision
        summary["recall"] = recall
    with open(os.path.join(out_dir, "selection-summary.json"), "w") as fh:
        json.dump(summary, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return selected, summary, split


def run_distill(cfg, teacher, data, selected, out_dir, mode="pu-s1", budget=None, n_l_override=None):
    """Stage three: distill the half-width student on the extended set."""
    os.makedirs(out_dir, exist_ok=True)
    section = cfg["distill"]
    n_l = n_l_override if n_l_override is not None else cfg["data"]["n_labeled_per_class"]
    split = make_pu_split(data.train, n_l, data.pool, cfg["data"]["class_prior"], seed=cfg["seed"])
    selected = np.asarray(selected, dtype=np.int64)
    if mode == "pu-s2":
        if budget is None:
            raise ConfigError("budget", "pu-s2 mode requires --budget")
        if budget > selected.size:
            raise BudgetError(
                f"budget {budget} exceeds the {selected.size} selected examples"
            )
        rng = seeded_rng(cfg["seed"], "pu-s2-subsample")
        selected = np.sort(rng.choice(selected, size=budget, replace=False))
    elif mode != "pu-s1":
        raise ConfigError("mode", f"unknown mode {mode!r}")

    extended = extend_dataset(split.positives, split.pool, selected)
    teacher_cfg = cfg["teacher"]
    student = build_classifier_network(
        data.train.geometry,
        data.train.num_classes,
        halved_widths(teacher_cfg["conv_channels"]),
        halved_widths(teacher_cfg["dense_widths"]),
        seeded_rng(cfg["seed"], "student-init"),
    )
    run = prepare_distillation(
        teacher,
        student,
        extended.images,
        _optimizer(section),
        temperature=section["temperature"],
        robust=section["robust"],
        epsilon=section["epsilon"],
        num_vectors=section["num_vectors"] if section["robust"] else 1,
        floor=section["weight_floor"],
        seed=cfg["seed"],
        num_classes=data.train.num_classes,
    )
    run_distillation(
        run,
        epochs=section["epochs"],
        batch_size=section["batch_size"],
        seed=cfg["seed"],
        test_set=data.test,
    )
    student_path = os.path.join(out_dir, "student.ckpt")
    save_checkpoint(student, student_path)
    header = ["epoch", "train_loss", "chosen_vector_histogram", "test_top1"]
    if run.metrics and "test_top5" in run.metrics[0]:
        header.append("test_top5")
    write_csv(
        os.path.join(out_dir, "distill-metrics.csv"),
        header,
        [[row[h] for h in header] for row in run.metrics],
    )
    final = run.metrics[-1] if run.metrics else {}
    return student, run, final


def run_pipeline(cfg, out_dir, prior_override=None, n_l_override=None, teacher=None, cache_root=None):
    """Full train-pu -> select -> distill chain used by the sweeps."""
    data = load_experiment_data(cfg, cache_root=cache_root)
    if teacher is None:
        teacher, _ = ensure_teacher(cfg, data, os.path.join(out_dir, os.pardir, "shared"))
    classifier, split, _ = run_train_pu(
        cfg, data, out_dir, prior_override=prior_override, n_l_override=n_l_override
    )
    selected, summary, _ = run_select(
        cfg, classifier, data, out_dir, prior_override=prior_override, n_l_override=n_l_override
    )
    student, run, final = run_distill(
        cfg, teacher, data, selected, out_dir, n_l_override=n_l_override
    )
    return {
        "selected_count": int(selected.size),
        "n_tiny": len(split.positives),
        "summary": summary,
        "final": final,
        "teacher": teacher,
    }


def teacher_quality(teacher, data):
    return evaluate_accuracy(teacher, data.test)


def distillation_loss_of(teacher, images, temperature=1.0):
    """Mean teacher self-distillation CE; a cheap sanity metric."""
    probs, _ = __import__("pudistill.distill.targets", fromlist=["teacher_soft_targets"]).teacher_soft_targets(
        teacher, images, temperature
    )
    return float(np.mean(soft_cross_entropy_rows(probs, probs)))
