"""
WSGI config for the densest_bandits project.

Serves the admin and the read-only results API.
"""
import os

from django.core.wsgi import get_wsgi_application


os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'densest_bandits.settings')

application = get_wsgi_application()
