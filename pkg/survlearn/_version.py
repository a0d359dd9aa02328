# -*- coding: utf-8 -*-

#Version of the survlearn library.

__version__ = '0.1.0'
