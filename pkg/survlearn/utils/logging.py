import os
import yaml
import logging
import logging.config

__author__ = "Qi Wang"
__email__ = "qiwang.mse@gmail.com"


def setup_logger(logger_file=None, level=None):
    """Configure the survlearn loggers from the packaged yaml file.

    Args:
        logger_file (str): if given, every named logger also writes to this
            rotating log file.
        level (str): override the console handler level, e.g. 'DEBUG'.
    """
    with open(os.path.join(os.path.dirname(__file__),
                           'survlearn_logging.yaml'), 'r') as lf:
        config_dict = yaml.load(lf, Loader=yaml.FullLoader)
    if logger_file is not None:
        config_dict['handlers']['info_file_handler']['filename'] = logger_file
        for log_dict in config_dict['loggers'].values():
            log_dict['handlers'] += ['info_file_handler']
    else:
        config_dict['handlers'].pop('info_file_handler')
    if level is not None:
        config_dict['handlers']['console']['level'] = level

    logging.config.dictConfig(config_dict)


def get_logger(name):
    return logging.getLogger(name)
