"""Exception hierarchy shared across the toolkit."""


class DiscourseKitError(Exception):
    """Base class for all toolkit errors."""


# --- corpus ingestion ---

class ParseError(DiscourseKitError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateId(DiscourseKitError):
    pass


class EmptyAfterCleaning(DiscourseKitError):
    pass


class NoSegmenter(DiscourseKitError):
    pass


class NoTagger(DiscourseKitError):
    pass


class EmptyVocabulary(DiscourseKitError):
    pass


# --- topic modeling ---

class EmptyCorpus(DiscourseKitError):
    pass


class InvalidConfig(DiscourseKitError):
    pass


class TopicOutOfRange(DiscourseKitError):
    pass


class DocOutOfRange(DiscourseKitError):
    pass


class KTooLarge(DiscourseKitError):
    pass


class WordAbsentFromCorpus(DiscourseKitError):
    pass


class InvalidMapping(DiscourseKitError):
    pass


# --- LLM labeling ---

class TemplateError(DiscourseKitError):
    pass


class MissingSenses(DiscourseKitError):
    pass


class LlmUnavailable(DiscourseKitError):
    pass


class MalformedResponse(DiscourseKitError):
    def __init__(self, message, response=None):
        self.response = response
        super().__init__(message)


class EmptyResponse(DiscourseKitError):
    pass


# --- phraseology ---

class NodeAbsent(DiscourseKitError):
    pass


class PatternSyntaxError(DiscourseKitError):
    pass


class NoNodeSlot(DiscourseKitError):
    pass


class MultipleNodeSlots(DiscourseKitError):
    pass


class SlotOutOfRange(DiscourseKitError):
    pass


class UnknownMatch(DiscourseKitError):
    pass


class MissingSection(DiscourseKitError):
    pass


# --- workspace / service ---

class CorruptWorkspace(DiscourseKitError):
    pass


class JobAlreadyRunning(DiscourseKitError):
    pass
