"""The LPWC class and property inventory.

This is the single place to reconcile the registry with the published OWL
file. Properties are ``(local name, kind, domain, range, markdown)`` where
``kind`` is ``"object"`` or ``"datatype"``, ``range`` is a class local name
for object properties and an XSD local name for datatype properties, and
``markdown`` marks fields whose values pass through markdown stripping.
"""

CLASSES = [
    ("Paper", "A machine learning publication."),
    ("Author", "A person credited as author of a paper."),
    ("Conference", "A conference edition in which papers are published."),
    ("Repository", "A source code repository implementing a paper."),
    ("Task", "A machine learning task addressed by papers."),
    ("Dataset", "A dataset used for training or evaluation."),
    ("Method", "A method or building block used in papers."),
    ("Model", "A named model whose results appear in an evaluation table."),
    ("EvaluationTable", "A leaderboard for one task on one dataset or dataset variant."),
    ("EvaluationResult", "One row of an evaluation table."),
    ("Metric", "An evaluation metric."),
    ("Area", "A research area grouping tasks."),
    ("DatasetVariant", "A split or configuration of a dataset used in nested leaderboards."),
]

PROPERTIES = [
    # Paper
    ("title", "datatype", "Paper", "string", False),
    ("abstract", "datatype", "Paper", "string", True),
    ("arxivId", "datatype", "Paper", "string", False),
    ("date", "datatype", "Paper", "date", False),
    ("paperUrl", "datatype", "Paper", "anyURI", False),
    ("pdfUrl", "datatype", "Paper", "anyURI", False),
    ("authorName", "datatype", "Paper", "string", False),
    ("hasAuthor", "object", "Paper", "Author", False),
    ("hasTask", "object", "Paper", "Task", False),
    ("hasMethod", "object", "Paper", "Method", False),
    ("hasRepository", "object", "Paper", "Repository", False),
    ("hasOfficialRepository", "object", "Paper", "Repository", False),
    ("publishedIn", "object", "Paper", "Conference", False),
    # Author
    ("fullName", "datatype", "Author", "string", False),
    # Conference
    ("conferenceName", "datatype", "Conference", "string", False),
    ("acronym", "datatype", "Conference", "string", False),
    # Repository
    ("repoUrl", "datatype", "Repository", "anyURI", False),
    ("isOfficial", "datatype", "Repository", "boolean", False),
    ("framework", "datatype", "Repository", "string", False),
    # Task
    ("taskName", "datatype", "Task", "string", False),
    ("taskDescription", "datatype", "Task", "string", True),
    ("hasSubtask", "object", "Task", "Task", False),
    ("inArea", "object", "Task", "Area", False),
    # Area
    ("areaName", "datatype", "Area", "string", False),
    # Dataset
    ("datasetName", "datatype", "Dataset", "string", False),
    ("datasetFullName", "datatype", "Dataset", "string", False),
    ("datasetDescription", "datatype", "Dataset", "string", True),
    ("datasetUrl", "datatype", "Dataset", "anyURI", False),
    ("introducedDate", "datatype", "Dataset", "date", False),
    ("introducedIn", "object", "Dataset", "Paper", False),
    # DatasetVariant
    ("variantName", "datatype", "DatasetVariant", "string", False),
    # Method
    ("methodName", "datatype", "Method", "string", False),
    ("methodFullName", "datatype", "Method", "string", False),
    ("methodDescription", "datatype", "Method", "string", True),
    ("introducedYear", "datatype", "Method", "gYear", False),
    ("methodIntroducedIn", "object", "Method", "Paper", False),
    # Model
    ("modelName", "datatype", "Model", "string", False),
    # Metric
    ("metricName", "datatype", "Metric", "string", False),
    # EvaluationTable
    ("forTask", "object", "EvaluationTable", "Task", False),
    ("onDataset", "object", "EvaluationTable", "Dataset", False),
    ("onDatasetVariant", "object", "EvaluationTable", "DatasetVariant", False),
    ("parentTable", "object", "EvaluationTable", "EvaluationTable", False),
    # EvaluationResult
    ("inTable", "object", "EvaluationResult", "EvaluationTable", False),
    ("evaluatesModel", "object", "EvaluationResult", "Model", False),
    ("hasMetric", "object", "EvaluationResult", "Metric", False),
    ("metricValue", "datatype", "EvaluationResult", "string", False),
    ("reportedIn", "object", "EvaluationResult", "Paper", False),
]

# URI path segment per class.
SEGMENTS = {
    "Paper": "paper",
    "Author": "author",
    "Conference": "conference",
    "Repository": "repository",
    "Task": "task",
    "Dataset": "dataset",
    "Method": "method",
    "Model": "model",
    "EvaluationTable": "evaluation",
    "EvaluationResult": "result",
    "Metric": "metric",
    "Area": "area",
    "DatasetVariant": "datasetvariant",
}

# Property holding the human-readable label of each class.
LABELS = {
    "Paper": "title",
    "Author": "fullName",
    "Conference": "conferenceName",
    "Repository": "repoUrl",
    "Task": "taskName",
    "Dataset": "datasetName",
    "Method": "methodName",
    "Model": "modelName",
    "Metric": "metricName",
    "Area": "areaName",
    "DatasetVariant": "variantName",
}
