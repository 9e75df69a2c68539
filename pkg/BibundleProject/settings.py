"""
Django settings for BibundleProject project.

Generated by 'django-admin startproject' using Django 5.2.5.

For more information on this file, see
https://docs.djangoproject.com/en/5.2/topics/settings/

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""
import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get('SECRET_KEY', 'dev-secret-key')

DEBUG = os.environ.get('DEBUG', 'False') == 'True'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'BibundleApp',
]

MIDDLEWARE = []


# Database
# https://docs.djangoproject.com/en/5.2/ref/settings/#databases

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}


# Internationalization
# https://docs.djangoproject.com/en/5.2/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_TZ = True

# Default primary key field type
# https://docs.djangoproject.com/en/5.2/ref/settings/#default-auto-field

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Bibundle calculus

BIBUNDLE_DEFAULT_SEED = int(os.environ.get('BIBUNDLE_DEFAULT_SEED', '7'))
BIBUNDLE_MAX_GROUP_ORDER = int(os.environ.get('BIBUNDLE_MAX_GROUP_ORDER', '64'))
BIBUNDLE_ORACLE_MAX_CARRIER = int(os.environ.get('BIBUNDLE_ORACLE_MAX_CARRIER', '8'))
BIBUNDLE_LAW_CASES = int(os.environ.get('BIBUNDLE_LAW_CASES', '100'))
BIBUNDLE_SEARCH_LIMIT = int(os.environ.get('BIBUNDLE_SEARCH_LIMIT', '200000'))
BIBUNDLE_LOG_LEVEL = os.environ.get('BIBUNDLE_LOG_LEVEL', 'WARNING')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '{levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'BibundleApp': {
            'handlers': ['console'],
            'level': BIBUNDLE_LOG_LEVEL,
            'propagate': False,
        },
    },
}
