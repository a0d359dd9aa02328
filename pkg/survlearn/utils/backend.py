import os
import json
import time
from survlearn.utils.config import load_default_environment
from survlearn.utils.directory import create_path, write_file
from survlearn.utils.logging import setup_logger, get_logger

"""
All survlearn naming conventions:
    If name start with "_", it's private function.
    If name end with "_", it's a fitted (learned) property.

"""

__author__ = "Qi Wang"
__email__ = "qiwang.mse@gmail.com"


class BackendContext(object):
    """Utility class to prepare survlearn output paths and logging.

    Args:
        output_path: str (default: None)
            Directory that relative output file names are resolved against.
            If 'tmp' or 'default', use /tmp/survlearn/task_%pid/output_%ts.
            If None, relative names resolve against the working directory.
        log_file: str (default: None)
            If given, the survlearn loggers also write to this file.
        overwrite_path:
            Whether overwrite when output path exists.
        merge_path:
            Whether merge path when output path exists.
        log_level: str (default: None)
            Console log level override, e.g. 'WARNING' for quiet scripts.
    """

    def __init__(self, output_path=None, log_file=None,
                 overwrite_path=False, merge_path=True, log_level=None):
        self.overwrite_path = overwrite_path
        self.merge_path = merge_path
        self._prepare_paths(output_path)
        setup_logger(logger_file=log_file, level=log_level)
        self.logger_ = get_logger(self.__class__.__name__)
        if self.output_path is not None:
            self.logger_.debug("survlearn output path is : {}".format(
                self.output_path))

    @property
    def output_path(self):
        # Return the absolute path with ~ and environment variables expanded.
        if not hasattr(self, '_absoutput_path_'):
            self._absoutput_path_ = None if self.output_path_ is None else \
                os.path.expanduser(os.path.expandvars(self.output_path_))
        return self._absoutput_path_

    def _prepare_paths(self, output_path=None):
        if output_path == 'tmp' or output_path == 'default':
            output_path = '/tmp/survlearn/task_%d/output_%d' % (
                os.getpid(), int(time.time()))
        self.output_path_ = output_path

        if output_path is not None:
            create_path(self.output_path_,
                        overwrite=self.overwrite_path, merge=self.merge_path)


class Backend(object):
    """Utility class to load the default environment and resolve paths."""

    def __init__(self, context):
        self.context = context
        if self.output_path and not os.path.exists(self.output_path):
            raise ValueError(
                "Output path {} does not exist.".format(self.output_path))

        self.logger = get_logger(self.__class__.__name__)

    @property
    def output_path(self):
        return self.context.output_path

    @property
    def def_env(self):
        if not hasattr(self, "def_env_"):
            self.def_env_ = load_default_environment()
        return self.def_env_

    def resolve(self, file):
        if self.output_path is None or os.path.isabs(file):
            return file
        return os.path.join(self.output_path, file)


class ModelBackend(Backend):
    """Utility class to save/load model artifacts, reports and cohorts."""

    def save_json(self, data, json_file):
        json_file = self.resolve(json_file)
        write_file(json_file, json.dumps(data, indent=2) + '\n')
        self.logger.debug("Write {}.".format(json_file))
        return json_file

    def save_model(self, model, model_file):
        model_file = self.save_json(model.to_dict(), model_file)
        self.logger.info("Save {} to {}.".format(
            model.__class__.__name__, model_file))
        return model_file

    @staticmethod
    def load_model_by_file(model_file):
        # imported here, the estimators themselves depend on this module
        from survlearn.learn.coxph import CoxPHModel
        from survlearn.learn.glm import LogisticModel, PoissonSurvivalModel

        with open(model_file, 'r', encoding='utf-8') as rf:
            data = json.load(rf)
        model_types = {'cox': CoxPHModel,
                       'logistic': LogisticModel,
                       'poisson_survival': PoissonSurvivalModel}
        model_type = data.get('model_type')
        if model_type not in model_types:
            raise ValueError("model_type {} of {} is unknown. Possible "
                             "values are {}".format(model_type, model_file,
                                                    list(model_types)))
        return model_types[model_type].from_dict(data)

    def save_cohort(self, cohort, csv_file):
        from survlearn.dataset.io import cohort_to_csv

        csv_file = self.resolve(csv_file)
        write_file(csv_file, cohort_to_csv(cohort))
        self.logger.debug("Write cohort of {} records to {}.".format(
            len(cohort), csv_file))
        return csv_file
