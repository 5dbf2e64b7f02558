# model_manager.py
import json
import os
from typing import Dict, List

from modules.model import (FoliatedModel, load_model, model_to_dict, model_to_text, zoo, zoo_names)
from utils import ensure_folder, get_logger, get_models_dir

logger = get_logger(__name__)

ZOO_PREFIX = "zoo:"


class ModelManager:
    def __init__(self, models_dir: str = None):
        """
        Resolve and store foliated models.
        :param models_dir: folder searched for bare file names that do not exist as given
        """
        self.models_dir = models_dir or get_models_dir()
        self._cache: Dict[str, FoliatedModel] = {}

    def resolve(self, source: str) -> FoliatedModel:
        """Load `zoo:<name>` or a model file; repeated sources come from the cache."""
        if source in self._cache:
            return self._cache[source]
        if source.startswith(ZOO_PREFIX):
            model = zoo(source[len(ZOO_PREFIX):])
        else:
            model = self.load_file(source)
        logger.info("Loaded model %s from %s (%d generators, 2n = %d)", model.name, source,
                    model.ambient, 2 * model.n)
        self._cache[source] = model
        return model

    def find_file(self, source: str) -> str:
        if os.path.exists(source):
            return source
        candidate = os.path.join(self.models_dir, source)
        if os.path.exists(candidate):
            return candidate
        raise FileNotFoundError(f"Model file not found: {source}")

    def load_file(self, source: str) -> FoliatedModel:
        path = self.find_file(source)
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
        name = os.path.splitext(os.path.basename(path))[0]
        return load_model(text, name)

    def save(self, model: FoliatedModel, path: str) -> str:
        """Write the model as JSON for a .json path, in the text format otherwise."""
        ensure_folder(os.path.dirname(os.path.abspath(path)))
        if path.lower().endswith(".json"):
            content = json.dumps(model_to_dict(model), indent=2, ensure_ascii=False) + "\n"
        else:
            content = model_to_text(model)
        with open(path, "w", encoding="utf-8") as f:
            f.write(content)
        logger.info("Model %s written to %s", model.name, path)
        return path

    @staticmethod
    def list_zoo() -> List[Dict[str, object]]:
        """Every builtin model with its basic shape."""
        info = []
        for name in zoo_names():
            m = zoo(name)
            info.append({"name": name, "generators": m.ambient, "transverse_dim": 2 * m.n,
                         "foliation": [m.generators[i] for i in m.foliation_dirs], "contact": m.is_contact})
        return info
