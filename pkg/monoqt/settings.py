"""
Django settings for the monoqt project.

The project hosts the ``lab`` application: negativity, teleportation
capability and monogamy experiments on multi-qudit states, driven through
``manage.py`` commands.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

import os
from pathlib import Path

import dj_database_url
from dotenv import load_dotenv

load_dotenv()
# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# The lab has no web surface; the key only satisfies Django's startup checks.
SECRET_KEY = os.getenv('DJANGO_SECRET_KEY', 'monoqt-local-only-key')

DEBUG = os.getenv('DJANGO_DEBUG', '0') == '1'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'rest_framework',
    'lab',
]


# Database (run archive, only touched by ``--save`` and the ``runs`` command)
# https://docs.djangoproject.com/en/5.2/ref/settings/#databases

DATABASES = {
    'default': dj_database_url.config(
        default=f"sqlite:///{BASE_DIR / 'db.sqlite3'}",
    )
}

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# REST Framework settings (serializers and renderers only)
REST_FRAMEWORK = {
    'COERCE_DECIMAL_TO_STRING': False,
    'UNAUTHENTICATED_USER': None,
}


# Logging: diagnostics go to stderr so stdout stays machine-readable.
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'stderr': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'lab': {
            'handlers': ['stderr'],
            'level': os.getenv('MONOQT_LOG_LEVEL', 'WARNING'),
            'propagate': False,
        },
    },
}


# Lab settings

LAB_EIGENSOLVER = os.getenv('MONOQT_EIGENSOLVER', 'jacobi')

LAB_THREADS = int(os.getenv('MONOQT_THREADS', os.cpu_count() or 1))

LAB_REJECTION_BUDGET = int(os.getenv('MONOQT_REJECTION_BUDGET', '10000'))

LAB_MAX_DIMENSION = 1024

LAB_TOLERANCES = {
    'hermiticity': 1e-10,
    'eigen_residual': 1e-9,
    'trace': 1e-10,
    'positivity': 1e-9,
    'normalization': 1e-12,
    'clamp': 1e-12,
    'violation': 1e-9,
    'report': 1e-9,
    'eigen_convergence': 1e-12,
    'eigen_max_sweeps': 100,
}

LAB_OPTIMIZER = {
    'restarts': 8,
    'max_iterations': 500,
    'step_size': 0.1,
    'gradient_tolerance': 1e-8,
    'ceiling_tolerance': 1e-9,
    'eigensolver': 'lapack',
}
