"""Evaluation harnesses: k-fold precision/recall and the silo-effect study.

The cross-validation experiment splits a curated list into disjoint seed
sets, expands each independently, and scores the growing core against the
full list after every iteration. The silo experiment seeds from a single
community and tracks how homogeneous the selections stay.
"""

from __future__ import annotations

import csv
import json
import random
from collections import Counter
from dataclasses import dataclass, field

from .aggregation import FilterConfig
from .ranking import HitsParams
from .session import CurationSession, ExplorationBudgets, run_auto
from .snapshot import SnapshotStore, UserId


@dataclass
class EvalRow:
    iteration: int
    precision: list[float]
    recall: list[float]
    core_size: list[int]
    mean_precision: float
    mean_recall: float


@dataclass
class EvalReport:
    k: int
    rows: list[EvalRow] = field(default_factory=list)


@dataclass
class SiloRow:
    iteration: int
    homogeneity: float
    cross_selections: int


@dataclass
class SiloReport:
    seed_community: int
    rows: list[SiloRow] = field(default_factory=list)
    selected: list[UserId] = field(default_factory=list)
    opposing_overlap: list[UserId] = field(default_factory=list)


def crossval_split(full_list: list[UserId], k: int, seed: int) -> list[list[UserId]]:
    """Shuffle the list with the given seed and deal it into k disjoint
    subsets round-robin (sizes differ by at most one)."""
    unique: list[UserId] = []
    for u in full_list:
        if u not in unique:
            unique.append(u)
    if k <= 0 or k > len(unique):
        raise ValueError(f"k must be in 1..{len(unique)}, got {k}")
    shuffled = list(unique)
    random.Random(seed).shuffle(shuffled)
    splits: list[list[UserId]] = [[] for _ in range(k)]
    for i, u in enumerate(shuffled):
        splits[i % k].append(u)
    return splits


def precision_recall(core: set[UserId], ground_truth: set[UserId]) -> tuple[float, float]:
    core = set(core)
    ground_truth = set(ground_truth)
    if not core or not ground_truth:
        raise ValueError("precision/recall need non-empty core and ground truth")
    hits = len(core & ground_truth)
    return hits / len(core), hits / len(ground_truth)


def run_crossval_experiment(
    store: SnapshotStore,
    full_list: list[UserId],
    k: int,
    iterations: int,
    top_k: int,
    r: int,
    budgets: ExplorationBudgets | None = None,
    filters: FilterConfig | None = None,
    hits_params: HitsParams = HitsParams(),
    split_seed: int = 0,
) -> EvalReport:
    """Expand each split independently (no state shared between runs) and
    report per-split and mean precision/recall per iteration, including an
    iteration-0 row for the bootstrap core."""
    splits = crossval_split(full_list, k, split_seed)
    truth = set(full_list)
    # per split, per iteration: (precision, recall, core size)
    trajectories: list[list[tuple[float, float, int]]] = []
    for split in splits:
        scores: list[tuple[float, float, int]] = []

        def score_now(session: CurationSession) -> None:
            core = set(session.sets.core)
            p, rec = precision_recall(core, truth)
            scores.append((p, rec, len(core)))

        session = run_auto(
            split,
            store,
            iterations=iterations,
            r=r,
            top_k=top_k,
            budgets=budgets,
            filters=filters,
            hits_params=hits_params,
            on_cycle=score_now,
        )
        p0 = precision_recall(set(split), truth)
        scores.insert(0, (p0[0], p0[1], len(split)))
        del session
        trajectories.append(scores)

    report = EvalReport(k=k)
    for it in range(iterations + 1):
        precisions = [traj[it][0] for traj in trajectories]
        recalls = [traj[it][1] for traj in trajectories]
        sizes = [traj[it][2] for traj in trajectories]
        report.rows.append(
            EvalRow(
                iteration=it,
                precision=precisions,
                recall=recalls,
                core_size=sizes,
                mean_precision=sum(precisions) / k,
                mean_recall=sum(recalls) / k,
            )
        )
    return report


def run_silo_experiment(
    store: SnapshotStore,
    full_list: list[UserId],
    biased_subset: list[UserId],
    iterations: int,
    top_k: int,
    r: int,
    labels: dict[UserId, int],
    budgets: ExplorationBudgets | None = None,
    filters: FilterConfig | None = None,
    hits_params: HitsParams = HitsParams(),
) -> SiloReport:
    """Seed from one community of a curated list and measure how selections
    stay inside it.

    Homogeneity at an iteration is the fraction of that iteration's
    selections labeled with the seed community (1.0 when nothing was
    selected); opposing_overlap lists selected users from the other
    communities' portion of the full list.
    """
    full_set = set(full_list)
    outsiders = [u for u in biased_subset if u not in full_set]
    if outsiders:
        raise ValueError(f"biased subset not contained in the full list: {outsiders}")
    missing = [u for u in biased_subset if u not in labels]
    if missing:
        raise ValueError(f"no community label for {missing}")
    seed_counts = Counter(labels[u] for u in biased_subset)
    seed_community = sorted(seed_counts.items(), key=lambda kv: (-kv[1], kv[0]))[0][0]

    report = SiloReport(seed_community=seed_community)

    def score_cycle(session: CurationSession) -> None:
        record = session.history[-1]
        picked = record.selected
        unlabeled = [u for u in picked if u not in labels]
        if unlabeled:
            raise ValueError(f"no community label for selected users {unlabeled}")
        same = sum(1 for u in picked if labels[u] == seed_community)
        homogeneity = same / len(picked) if picked else 1.0
        report.rows.append(
            SiloRow(
                iteration=session.iteration,
                homogeneity=homogeneity,
                cross_selections=len(picked) - same,
            )
        )
        report.selected.extend(picked)

    run_auto(
        biased_subset,
        store,
        iterations=iterations,
        r=r,
        top_k=top_k,
        budgets=budgets,
        filters=filters,
        hits_params=hits_params,
        on_cycle=score_cycle,
    )
    opposing = {u for u in full_list if labels.get(u) != seed_community}
    report.opposing_overlap = sorted(set(report.selected) & opposing)
    return report


# -- report serialization -------------------------------------------------


def eval_report_to_dict(report: EvalReport) -> dict:
    return {
        "k": report.k,
        "rows": [
            {
                "iteration": row.iteration,
                "precision": row.precision,
                "recall": row.recall,
                "core_size": row.core_size,
                "mean_precision": row.mean_precision,
                "mean_recall": row.mean_recall,
            }
            for row in report.rows
        ],
    }


def eval_report_from_dict(data: dict) -> EvalReport:
    return EvalReport(
        k=data["k"],
        rows=[
            EvalRow(
                iteration=row["iteration"],
                precision=list(row["precision"]),
                recall=list(row["recall"]),
                core_size=list(row["core_size"]),
                mean_precision=row["mean_precision"],
                mean_recall=row["mean_recall"],
            )
            for row in data["rows"]
        ],
    )


def write_eval_json(report: EvalReport, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(eval_report_to_dict(report), fh, sort_keys=True, indent=2)
        fh.write("\n")


def read_eval_json(path) -> EvalReport:
    with open(path, encoding="utf-8") as fh:
        return eval_report_from_dict(json.load(fh))


def write_eval_csv(report: EvalReport, path) -> None:
    """Table layout: iteration, per-split and mean precision, then the same
    for recall. One data row per completed iteration (the iteration-0
    bootstrap row lives only in the JSON report); full float precision."""
    k = report.k
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        header = ["iteration"]
        header += [f"precision_set{i + 1}" for i in range(k)] + ["precision_mean"]
        header += [f"recall_set{i + 1}" for i in range(k)] + ["recall_mean"]
        writer.writerow(header)
        for row in report.rows:
            if row.iteration == 0:
                continue
            out = [row.iteration]
            out += [repr(p) for p in row.precision] + [repr(row.mean_precision)]
            out += [repr(rc) for rc in row.recall] + [repr(row.mean_recall)]
            writer.writerow(out)


def read_eval_csv(path) -> EvalReport:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        k = sum(1 for name in header if name.startswith("precision_set"))
        report = EvalReport(k=k)
        for raw in reader:
            it = int(raw[0])
            precision = [float(x) for x in raw[1 : 1 + k]]
            mean_p = float(raw[1 + k])
            recall = [float(x) for x in raw[2 + k : 2 + 2 * k]]
            mean_r = float(raw[2 + 2 * k])
            report.rows.append(
                EvalRow(
                    iteration=it,
                    precision=precision,
                    recall=recall,
                    core_size=[],
                    mean_precision=mean_p,
                    mean_recall=mean_r,
                )
            )
        return report


def silo_report_to_dict(report: SiloReport) -> dict:
    return {
        "seed_community": report.seed_community,
        "rows": [
            {
                "iteration": row.iteration,
                "homogeneity": row.homogeneity,
                "cross_selections": row.cross_selections,
            }
            for row in report.rows
        ],
        "selected": list(report.selected),
        "opposing_overlap": list(report.opposing_overlap),
    }


def write_silo_json(report: SiloReport, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(silo_report_to_dict(report), fh, sort_keys=True, indent=2)
        fh.write("\n")


def write_silo_csv(report: SiloReport, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "homogeneity", "cross_selections"])
        for row in report.rows:
            writer.writerow([row.iteration, repr(row.homogeneity), row.cross_selections])
