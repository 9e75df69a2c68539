from django.apps import AppConfig


class BibundleappConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'BibundleApp'
