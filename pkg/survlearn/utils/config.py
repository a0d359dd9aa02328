import os
import json
import yaml
from dataclasses import dataclass, asdict, replace

__author__ = "Qi Wang"
__email__ = "qiwang.mse@gmail.com"

module_dir = os.path.dirname(os.path.abspath(__file__))


def load_default_environment():
    with open(os.path.join(module_dir, 'default_environment.yaml'),
              'r') as lf:
        return yaml.load(lf, Loader=yaml.FullLoader)


@dataclass(frozen=True)
class FitConfig(object):
    """Solver settings shared by every estimator.

    Args:
        tol (float): relative log-likelihood change below which the damped
            Newton iterations stop.
        max_iter (int): maximum number of Newton iterations.
        max_halving (int): maximum number of step halvings per iteration.
        ties (str): tie convention of the Cox partial likelihood. Only
            'breslow' is supported.
    """
    tol: float = 1e-8
    max_iter: int = 100
    max_halving: int = 30
    ties: str = 'breslow'

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive, got {}.".format(self.tol))
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ValueError("max_iter must be an integer >= 1, "
                             "got {}.".format(self.max_iter))
        if int(self.max_halving) != self.max_halving or self.max_halving < 0:
            raise ValueError("max_halving must be an integer >= 0, "
                             "got {}.".format(self.max_halving))
        if self.ties != 'breslow':
            raise ValueError("ties {} is unknown. Possible values are: "
                             "['breslow']".format(self.ties))

    @classmethod
    def _fields(cls):
        return ('tol', 'max_iter', 'max_halving', 'ties')

    @classmethod
    def from_env(cls):
        env = load_default_environment()
        return cls(**{k: env[k] for k in cls._fields() if k in env})

    @classmethod
    def from_json(cls, json_file, base=None):
        with open(json_file, 'r', encoding='utf-8') as rf:
            params = json.load(rf)
        unknown = set(params) - set(cls._fields())
        if unknown:
            raise ValueError("Unknown fit config keys {} in {}. Possible "
                             "values are: {}".format(sorted(unknown),
                                                     json_file,
                                                     list(cls._fields())))
        base = cls.from_env() if base is None else base
        return replace(base, **params)

    @classmethod
    def resolve(cls, flags=None, json_file=None):
        """Build a config with precedence flags > json file > defaults.

        Args:
            flags (dict): values given on the command line; None entries
                are treated as not given.
            json_file (str): optional JSON config file.
        """
        config = cls.from_env()
        if json_file is not None:
            config = cls.from_json(json_file, base=config)
        if flags:
            given = {k: v for k, v in flags.items()
                     if v is not None and k in cls._fields()}
            config = replace(config, **given)
        return config

    def to_dict(self):
        return asdict(self)
