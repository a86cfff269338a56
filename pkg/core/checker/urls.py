from django.urls import path, include
from rest_framework.routers import DefaultRouter
from .views import VerificationRunViewSet, act_view, facts_view, matrix_view

router = DefaultRouter()
router.register(r'runs', VerificationRunViewSet, basename='run')

urlpatterns = [
    path('', include(router.urls)),
    path('facts/', facts_view, name='facts'),
    path('matrix/', matrix_view, name='matrix'),
    path('act/', act_view, name='act'),
]
