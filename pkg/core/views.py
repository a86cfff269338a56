# core/views.py
from rest_framework import permissions
from rest_framework.decorators import api_view, permission_classes
from rest_framework.response import Response

from core.utils.bundled import bundled_scripts


@api_view(['GET'])
@permission_classes([permissions.AllowAny])
def home(request):
    return Response({
        "scripts": bundled_scripts(),
        "runs": "/api/runs/",
        "facts": "/api/facts/",
        "matrix": "/api/matrix/",
        "act": "/api/act/",
        "docs": "/docs/",
    })
