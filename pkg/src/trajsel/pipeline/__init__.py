from .collect import ARCHIVE, collect, collect_triple, fixed_budget_performance, read_archive
from .config import DESK, ProtocolConfig, RunKey, derive_seeds, desk_config, load_config
from .report import report
from .stages import MissingStage, features, select_stage, train

STAGES = ("collect", "features", "train", "select", "report")


def run_stage(name: str, cfg: ProtocolConfig, out=None):
    fn = {"collect": collect, "features": features, "train": train,
          "select": select_stage, "report": report}[name]
    return fn(cfg, out)


__all__ = ["ARCHIVE", "DESK", "STAGES", "MissingStage", "ProtocolConfig", "RunKey", "collect",
           "collect_triple", "derive_seeds", "desk_config", "features", "fixed_budget_performance",
           "load_config", "read_archive", "report", "run_stage", "select_stage", "train"]
