import os
import lockfile
import shutil

__author__ = "Qi Wang"
__email__ = "qiwang.mse@gmail.com"


def delete_path(path):
    if os.path.exists(path):
        shutil.rmtree(path)


def create_path(path, overwrite=False, merge=False):
    if os.path.exists(path):
        if overwrite:
            delete_path(path)
            os.makedirs(path)
        elif not merge:
            raise FileExistsError("path {} already exists.".format(path))
    else:
        os.makedirs(path)


def ensure_parent(file):
    parent = os.path.dirname(os.path.abspath(file))
    if not os.path.exists(parent):
        os.makedirs(parent)


def write_file(file, message, mode='w'):
    ensure_parent(file)
    with lockfile.LockFile(file):
        with open(file, mode, encoding='utf-8', newline='') as wf:
            wf.write(message)


def read_file(file, mode='r'):
    with open(file, mode, encoding='utf-8') as rf:
        lines = rf.readlines()
    return lines
