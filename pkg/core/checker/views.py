from rest_framework import mixins, permissions, viewsets
from rest_framework.decorators import api_view, permission_classes
from rest_framework.exceptions import ValidationError
from rest_framework.response import Response
from django_filters.rest_framework import DjangoFilterBackend
from drf_yasg.utils import swagger_auto_schema
from drf_yasg import openapi
import logging

from core.action.engine import ActionEngine, derive_braid_facts
from core.exceptions import CrosscapError
from core.homology import f2
from core.surface.curves import CurveId
from core.surface.facts import Provenance
from core.surface.table import template_facts
from core.utils.bundled import table_path
from core.words.syntax import parse_word

from .models import VerificationRun
from .serializers import (
    ActQuerySerializer,
    FactQuerySerializer,
    FactSerializer,
    VerificationRunSerializer,
    WordQuerySerializer,
)
from .services import load_curves, record_run, run_script

logger = logging.getLogger(__name__)

genus_param = openapi.Parameter('genus', openapi.IN_QUERY, type=openapi.TYPE_INTEGER, required=True)
word_param = openapi.Parameter('word', openapi.IN_QUERY, type=openapi.TYPE_STRING, required=True,
                               description="Word in canonical syntax, e.g. 'T^3' or 'u10 A2 C2^-1'")


def _validated(serializer_class, request):
    serializer = serializer_class(data=request.query_params)
    serializer.is_valid(raise_exception=True)
    return serializer.validated_data


# ---------------- Verification runs ----------------

class VerificationRunViewSet(mixins.ListModelMixin,
                             mixins.RetrieveModelMixin,
                             mixins.CreateModelMixin,
                             viewsets.GenericViewSet):
    """
    Recorded verification runs. Anyone may read them; creating a run checks
    the bundled script at the requested genus and stores the full report.
    """
    queryset = VerificationRun.objects.all()
    serializer_class = VerificationRunSerializer
    permission_classes = [permissions.IsAuthenticatedOrReadOnly]
    filter_backends = [DjangoFilterBackend]
    filterset_fields = ['script', 'genus', 'passed']

    @swagger_auto_schema(
        request_body=VerificationRunSerializer,
        responses={201: VerificationRunSerializer},
        operation_description="Check a bundled proof script at one genus and record the run.",
        security=[{'Bearer': []}]
    )
    def create(self, request, *args, **kwargs):
        return super().create(request, *args, **kwargs)

    def perform_create(self, serializer):
        data = serializer.validated_data
        try:
            report = run_script(data['script'], data['genus'], strict_axioms=data.get('strict_axioms', False))
        except CrosscapError as exc:
            raise ValidationError({"detail": str(exc)})
        serializer.instance = record_run(report, self.request.user)


# ---------------- Queries ----------------

@swagger_auto_schema(
    method='get',
    manual_parameters=[
        openapi.Parameter('genus', openapi.IN_QUERY, type=openapi.TYPE_INTEGER,
                          description="Expand the table at this genus; omit for the template lines"),
        openapi.Parameter('provenance', openapi.IN_QUERY, type=openapi.TYPE_STRING,
                          enum=[p.value for p in Provenance]),
    ],
    responses={200: FactSerializer(many=True)},
)
@api_view(['GET'])
@permission_classes([permissions.AllowAny])
def facts_view(request):
    params = _validated(FactQuerySerializer, request)
    try:
        if 'genus' in params:
            _, db = load_curves(params['genus'])
            facts = db.facts()
        else:
            path = table_path()
            facts = template_facts(path.read_text(), source=str(path))
    except CrosscapError as exc:
        raise ValidationError({"detail": str(exc)})
    if 'provenance' in params:
        facts = [fact for fact in facts if fact.provenance.value == params['provenance']]
    return Response(FactSerializer(facts, many=True).data)


@swagger_auto_schema(method='get', manual_parameters=[word_param, genus_param])
@api_view(['GET'])
@permission_classes([permissions.AllowAny])
def matrix_view(request):
    params = _validated(WordQuerySerializer, request)
    try:
        table, _ = load_curves(params['genus'])
        matrix = f2.word_matrix(parse_word(params['word']), table)
    except CrosscapError as exc:
        raise ValidationError({"detail": str(exc)})
    return Response({
        "word": params['word'],
        "genus": params['genus'],
        "rows": f2.dump_matrix(matrix).splitlines(),
    })


@swagger_auto_schema(
    method='get',
    manual_parameters=[
        word_param,
        openapi.Parameter('curve', openapi.IN_QUERY, type=openapi.TYPE_STRING, required=True),
        genus_param,
    ],
)
@api_view(['GET'])
@permission_classes([permissions.AllowAny])
def act_view(request):
    params = _validated(ActQuerySerializer, request)
    try:
        curve = CurveId.parse(params['curve'])
    except ValueError as exc:
        raise ValidationError({"curve": str(exc)})
    try:
        table, db = load_curves(params['genus'])
        engine = ActionEngine(table, derive_braid_facts(db))
        result = engine.act_word(parse_word(params['word']), curve)
    except CrosscapError as exc:
        raise ValidationError({"detail": str(exc)})
    if not result.known:
        return Response({"known": False, "missing_fact": result.missing_fact})
    return Response({
        "known": True,
        "image": str(result.image),
        "sign": result.sign,
        "facts": [str(fact) for fact in result.facts],
    })
